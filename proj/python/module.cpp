// Python bindings. JSON crosses the boundary as text; the package wrapper decodes it.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "glcorner/commands.hpp"
#include "glcorner/errors.hpp"
#include "glcorner/geometry.hpp"
#include "glcorner/oned.hpp"
#include "glcorner/spectral.hpp"

namespace py = pybind11;
using namespace glcorner;

namespace {

CommandContext context(const std::string& cache_dir, bool use_cache) {
  CommandContext ctx;
  ctx.cache_dir = cache_dir;
  ctx.use_cache = use_cache;
  return ctx;
}

CurvilinearPolygon shape_or_json(const std::string& shape) {
  if (!shape.empty() && shape.front() == '{') return polygon_from_json_text(shape);
  return builtin_shape(shape);
}

}  // namespace

PYBIND11_MODULE(_glcorner, m) {
  m.doc() = "Surface superconductivity in domains with corners";

  auto base = py::register_exception<Error>(m, "GlcornerError");
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("version", &code_version);
  m.def("command_names", &command_names);
  m.def("command_summary", &command_summary);
  m.def("command_defaults_json", [](const std::string& cmd) {
    Json out = Json::object();
    for (const auto& d : command_params(cmd)) out[d.name] = {{"default", d.value}, {"help", d.help}};
    return out.dump();
  });
  m.def("merge_params_json", [](const std::string& cmd, const std::string& config, const std::string& overrides) {
    return merge_params(cmd, Json::parse(config), Json::parse(overrides)).dump();
  });
  m.def(
      "run_json",
      [](const std::string& cmd, const std::string& params, const std::string& cache_dir, bool use_cache) {
        Json p = Json::parse(params);
        py::gil_scoped_release release;
        return run_command(cmd, p, context(cache_dir, use_cache)).to_json().dump();
      },
      py::arg("command"), py::arg("params"), py::arg("cache_dir") = ".glcorner-cache", py::arg("use_cache") = true);
  m.def(
      "sweep_json",
      [](const std::string& spec, const std::string& cache_dir, bool use_cache) {
        Json s = Json::parse(spec);
        py::gil_scoped_release release;
        SweepSummary r = run_sweep(s, context(cache_dir, use_cache));
        return Json{{"output", r.output.string()}, {"cells", r.cells}, {"failed", r.failed}, {"complete", r.complete}}
            .dump();
      },
      py::arg("spec"), py::arg("cache_dir") = ".glcorner-cache", py::arg("use_cache") = true);

  m.def(
      "theta0", [](double h, double T) { return compute_theta0(h, T).theta0; }, py::arg("h") = 0.02,
      py::arg("T") = 15.0);
  m.def(
      "surface_constants",
      [](double b, double h, double T) {
        SurfaceConstants c = compute_ecorr(b, h, T);
        return py::dict(py::arg("b") = c.b, py::arg("alpha0") = c.alpha0, py::arg("E0") = c.E0,
                        py::arg("f0_at_0") = c.f0_at_0, py::arg("ecorr") = c.ecorr, py::arg("trivial") = c.trivial,
                        py::arg("t") = c.profile.t, py::arg("f") = c.profile.f);
      },
      py::arg("b"), py::arg("h") = 0.01, py::arg("T") = 15.0);
  m.def(
      "gauss_bonnet_defect", [](const std::string& shape) { return gauss_bonnet_defect(shape_or_json(shape)); },
      py::arg("shape"));
  m.def(
      "corners",
      [](const std::string& shape) {
        std::vector<double> betas;
        for (const auto& c : shape_or_json(shape).corners()) betas.push_back(c.beta);
        return betas;
      },
      py::arg("shape"));
}
