#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "crgeo/types.hpp"

namespace crgeo {

enum class ViewKind { Elevation, ElevationAffiliate, HeisProjection, EtaDisk, EtaHalfPlane, ArgArgTorus };
const char* view_name(ViewKind v);
ViewKind view_from_name(const std::string& s);
// Layer names drawn by a view, in drawing order.
const std::vector<std::string>& view_layers(ViewKind v);

struct FigureSpec {
  ViewKind view = ViewKind::Elevation;
  double s = kSLow;
  std::map<std::string, bool> layers;        // missing entries are on
  std::map<std::string, std::string> style;  // layer -> stroke color
  std::optional<double> affiliate_theta;     // C1 parameter of the affiliate base point
  std::string normalization = "N1";          // chart for HeisProjection
  int n_curve = 2048;
  int n_arcs = 48;
  int n_pts = 48;
  int width = 800, height = 600;

  bool enabled(const std::string& layer) const;
  void validate() const;
  nlohmann::json to_json() const;
  static FigureSpec from_json(const nlohmann::json& j);
};

struct Polyline {
  std::vector<std::array<double, 2>> pts;
  std::vector<int> cusps;  // indices into pts
  bool closed = false;
};

struct Layer {
  std::string name;
  std::string color;
  std::vector<Polyline> lines;
  size_t sample_count() const;
};

struct Mark {
  std::string name;
  double x0 = 0, x1 = 0;
};

struct Figure {
  FigureSpec spec;
  std::vector<Layer> layers;
  std::vector<Mark> marks;
  std::string x_label, y_label;
  std::string notice;  // e.g. the affiliate base point lies on the axis

  const Layer* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

// Layered polylines for a spec. Throws on invalid specs or geometry failures.
Figure build_figure(const FigureSpec& spec);

// Deterministic SVG. Paths carry the figure polylines verbatim under a
// data-to-pixel transform recorded in the metadata.
std::string render_svg(const Figure& fig);
// Never throws: failures become an SVG carrying the message.
std::string render(const FigureSpec& spec);
std::string error_svg(const std::string& message, int width = 800, int height = 600);

// Rows: layer,sample_index,x0,x1,flags. flags is '|'-joined from
// {start, endpoint, cusp}; start marks the first sample of each polyline.
std::string export_csv(const Figure& fig);
std::string export_csv(const FigureSpec& spec);
std::vector<Layer> import_csv(const std::string& csv);

}  // namespace crgeo
