#include <fstream>
#include <sstream>

#include <json.hpp>

#include "glcorner/geometry.hpp"

namespace glcorner {

using nlohmann::json;

namespace {

Vec2 read_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw UsageError(std::string("polygon file: '") + what + "' must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json write_point(Vec2 p) { return json::array({p.x, p.y}); }

}  // namespace

CurvilinearPolygon polygon_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("polygon file: ") + e.what());
  }
  if (!doc.contains("arcs") || !doc["arcs"].is_array() || doc["arcs"].empty())
    throw UsageError("polygon file: missing non-empty 'arcs' array");
  std::vector<std::shared_ptr<const Arc>> arcs;
  for (const auto& a : doc["arcs"]) {
    std::string type = a.value("type", "");
    if (type == "segment") {
      arcs.push_back(std::make_shared<Segment>(read_point(a.at("from"), "from"), read_point(a.at("to"), "to")));
    } else if (type == "arc") {
      arcs.push_back(std::make_shared<CircularArc>(read_point(a.at("center"), "center"), a.at("radius").get<double>(),
                                                   a.at("start").get<double>(), a.at("sweep").get<double>()));
    } else if (type == "spline") {
      std::vector<Vec2> pts;
      for (const auto& p : a.at("points")) pts.push_back(read_point(p, "points"));
      arcs.push_back(std::make_shared<SplineArc>(std::move(pts)));
    } else {
      throw UsageError("polygon file: unknown arc type '" + type + "'");
    }
  }
  return CurvilinearPolygon(std::move(arcs), doc.value("name", "polygon"));
}

CurvilinearPolygon load_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open polygon file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return polygon_from_json_text(ss.str());
}

std::string polygon_to_json_text(const CurvilinearPolygon& poly) {
  json arcs = json::array();
  for (const auto& a : poly.arcs()) {
    if (auto seg = dynamic_cast<const Segment*>(a.get())) {
      arcs.push_back({{"type", "segment"}, {"from", write_point(seg->start())}, {"to", write_point(seg->end())}});
    } else if (auto c = dynamic_cast<const CircularArc*>(a.get())) {
      arcs.push_back({{"type", "arc"},
                      {"center", write_point(c->center())},
                      {"radius", c->radius()},
                      {"start", c->phi0()},
                      {"sweep", c->sweep()}});
    } else if (auto sp = dynamic_cast<const SplineArc*>(a.get())) {
      json pts = json::array();
      for (auto p : sp->points()) pts.push_back(write_point(p));
      arcs.push_back({{"type", "spline"}, {"points", pts}});
    }
  }
  return json{{"name", poly.name()}, {"arcs", arcs}}.dump(2);
}

}  // namespace glcorner
