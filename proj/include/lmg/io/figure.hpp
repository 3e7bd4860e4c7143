#pragma once

// Figure rendering for result bundles. Purely presentational: every number
// drawn comes from the bundle's tables or metadata.

#include <json.hpp>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lmg/error.hpp"
#include "lmg/io/csv.hpp"
#include "lmg/io/svg.hpp"

namespace lmg::io {

struct ResultBundle {
  std::string command;
  std::map<std::string, CsvTable> tables;  // keyed by command / table name
  nlohmann::json metadata;

  const CsvTable& table(const std::string& name) const {
    const auto it = tables.find(name);
    if (it == tables.end()) throw InvalidArgument("bundle has no '" + name + "' table");
    return it->second;
  }
};

inline const std::vector<std::string>& figure_styles() {
  static const std::vector<std::string> styles{"fig1", "fig1-inset", "fig2", "fig3", "fig3-inset", "fig4", "fig5",
                                               "fig6", "fig7", "fig8a", "fig8b"};
  return styles;
}

namespace figure_detail {

inline void require_columns(const CsvTable& t, const std::vector<std::string>& names, const std::string& style) {
  for (const auto& n : names) {
    if (!t.has_column(n)) throw InvalidArgument("style " + style + " needs column '" + n + "'");
  }
}

// Columns whose name starts with `prefix` (e.g. "L" matches "L" and "L[h_f=0.6]").
inline std::vector<std::size_t> prefixed_columns(const CsvTable& t, const std::string& prefix) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < t.header().size(); ++i) {
    const auto& h = t.header()[i];
    if (h == prefix || h.rfind(prefix + "[", 0) == 0 || h.rfind(prefix + "_", 0) == 0) out.push_back(i);
  }
  return out;
}

inline std::string bracket_label(const std::string& column) {
  const auto open = column.find('[');
  const auto close = column.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open) return column;
  return column.substr(open + 1, close - open - 1);
}

// Splits a long-format table into one series per distinct value of `key`.
inline std::vector<Series> split_by(const CsvTable& t, const std::string& key, const std::string& x,
                                    const std::string& y, const std::string& label_prefix) {
  const auto k = t.column(key);
  const auto xs = t.column(x);
  const auto ys = t.column(y);
  std::vector<double> keys;
  for (double v : k) {
    if (std::find(keys.begin(), keys.end(), v) == keys.end()) keys.push_back(v);
  }
  std::vector<Series> out;
  for (double kv : keys) {
    Series s;
    s.label = label_prefix + format_double(kv);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == kv) {
        s.x.push_back(xs[i]);
        s.y.push_back(ys[i]);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Series> wide_series(const CsvTable& t, const std::string& x, const std::string& prefix,
                                       const std::string& style) {
  require_columns(t, {x}, style);
  const auto cols = prefixed_columns(t, prefix);
  if (cols.empty()) throw InvalidArgument("style " + style + " needs at least one '" + prefix + "' column");
  const auto xs = t.column(x);
  std::vector<Series> out;
  for (std::size_t c : cols) out.push_back({bracket_label(t.header()[c]), xs, t.column(c), false});
  return out;
}

}  // namespace figure_detail

// Renders the figure `style` from an existing bundle as an SVG document.
inline std::string emit_figure(const ResultBundle& bundle, const std::string& style) {
  using namespace figure_detail;
  const Rect single{0, 0, 640, 440};

  if (style == "fig1") {
    const auto& t = bundle.table("gap");
    Panel p{single, "", "h", "E_k - E_0", wide_series(t, "h", "gap", style)};
    return render_svg(single.width, single.height, {p});
  }
  if (style == "fig1-inset") {
    const auto& t = bundle.table("curvature");
    require_columns(t, {"N", "h", "d2e"}, style);
    Panel p{single, "", "h", "d²(E₀/N)/dh²", split_by(t, "N", "h", "d2e", "N=")};
    return render_svg(single.width, single.height, {p});
  }
  if (style == "fig2" || style == "fig5" || style == "fig8a") {
    const auto& t = bundle.table("tdf");
    Panel p{single, "", "t", "ℒ(t)", wide_series(t, "t", "L", style)};
    return render_svg(single.width, single.height, {p});
  }
  if (style == "fig3" || style == "fig8b") {
    const auto& t = bundle.table("lmin-scan");
    require_columns(t, {"N", "h_f", "L_min"}, style);
    Panel p{single, "", "h_f", "ℒ_min", split_by(t, "N", "h_f", "L_min", "N=")};
    return render_svg(single.width, single.height, {p});
  }
  if (style == "fig3-inset") {
    const auto& t = bundle.table("h0-scaling");
    require_columns(t, {"N", "h0"}, style);
    const auto fit = bundle.metadata.contains("results") ? bundle.metadata["results"].value("fit", nlohmann::json{})
                                                         : nlohmann::json{};
    if (!fit.contains("a") || !fit.contains("b") || !fit.contains("c")) {
      throw InvalidArgument("style fig3-inset needs fit coefficients in the bundle metadata");
    }
    const double a = fit["a"], b = fit["b"], c = fit["c"];
    Series pts{"h₀(N)", {}, t.column("h0"), true};
    for (double n : t.column("N")) pts.x.push_back(1.0 / n);
    Series curve{"quadratic fit", {}, {}, false};
    const double xmax = *std::max_element(pts.x.begin(), pts.x.end());
    for (int i = 0; i <= 100; ++i) {
      const double x = xmax * 1.05 * i / 100.0;
      curve.x.push_back(x);
      curve.y.push_back(a + b * x + c * x * x);
    }
    Panel p{single, "", "1/N", "h₀", {pts, curve}};
    return render_svg(single.width, single.height, {p});
  }
  if (style == "fig4" || style == "fig6") {
    const auto& t = bundle.table("work-sweep");
    require_columns(t, {"h_f", "W", "dF", "W_irr", "ddF/dh", "dWirr/dh"}, style);
    const auto h = t.column("h_f");
    const double width = 640, panel_h = 330;
    std::vector<Panel> panels;
    panels.push_back({{0, 0, width, panel_h}, "(a)", "h_f", "⟨W⟩", {{"⟨W⟩", h, t.column("W"), false}}});
    panels.push_back({{0, panel_h, width, panel_h}, "(b)", "h_f", "ΔF", {{"ΔF", h, t.column("dF"), false}}});
    panels.push_back(
        {{0, 2 * panel_h, width, panel_h}, "(c)", "h_f", "⟨W_irr⟩", {{"⟨W_irr⟩", h, t.column("W_irr"), false}}});
    // Derivative insets in panels (b) and (c).
    const Rect inset_b{width * 0.52, panel_h * 1.08, width * 0.44, panel_h * 0.5};
    const Rect inset_c{width * 0.14, panel_h * 2.08, width * 0.44, panel_h * 0.5};
    panels.push_back({inset_b, "", "h_f", "dΔF/dh_f", {{"", h, t.column("ddF/dh"), false}}, false, 10.0});
    panels.push_back({inset_c, "", "h_f", "d⟨W_irr⟩/dh_f", {{"", h, t.column("dWirr/dh"), false}}, false, 10.0});
    return render_svg(width, 3 * panel_h, panels);
  }
  if (style == "fig7") {
    const auto& t = bundle.table("spectral");
    Panel p{single, "", "ω", "A(ω)", wide_series(t, "omega", "A", style)};
    return render_svg(single.width, single.height, {p});
  }
  throw InvalidArgument("unknown figure style '" + style + "'");
}

}  // namespace lmg::io
