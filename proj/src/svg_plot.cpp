// Copyright 2026 The shotgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shotgame/svg_plot.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "shotgame/error.hpp"

namespace shotgame {
namespace {

constexpr double kScale = 6.0;  // px per pitch unit
constexpr double kMargin = 20.0;
constexpr double kInsetW = 360.0;
constexpr double kInsetH = 200.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double px(double x) { return kMargin + x * kScale; }
double py(double y) { return kMargin + y * kScale; }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void line(std::ostream& os, const PitchPoint& a, const PitchPoint& b, const char* cls) {
  os << "  <line class=\"" << cls << "\" x1=\"" << num(px(a.x)) << "\" y1=\"" << num(py(a.y))
     << "\" x2=\"" << num(px(b.x)) << "\" y2=\"" << num(py(b.y)) << "\"/>\n";
}

void marker(std::ostream& os, const PitchPoint& p, const std::string& cls,
            const std::string& label, int index) {
  os << "  <circle class=\"" << cls << "\" data-index=\"" << index << "\" data-x=\""
     << num(p.x) << "\" data-y=\"" << num(p.y) << "\" cx=\"" << num(px(p.x)) << "\" cy=\""
     << num(py(p.y)) << "\" r=\"6\"/>\n";
  if (!label.empty()) {
    os << "  <text class=\"label\" x=\"" << num(px(p.x) + 8) << "\" y=\"" << num(py(p.y) - 8)
       << "\">" << escape(label) << "</text>\n";
  }
}

}  // namespace

std::string render_scenario_svg(const Scenario& s, const Json& response) {
  const double width = 2 * kMargin + pitch::kLength * kScale;
  const double pitch_h = 2 * kMargin + pitch::kWidth * kScale;
  const double height = pitch_h + kInsetH + 2 * kMargin;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
  os << "  <style>.pitch{fill:#3a7d44;stroke:#fff}.markings{stroke:#fff;stroke-width:1.5}"
        ".goal{stroke:#fff;stroke-width:4}.zone{fill:#ffeb3b;fill-opacity:0.3;stroke:#fbc02d}"
        ".shooter{fill:#d32f2f}.teammate{fill:#1976d2}.defender{fill:#212121}"
        ".keeper{fill:#ff9800}.label{font:12px sans-serif;fill:#fff}"
        ".axis{stroke:#000}.curve{fill:none;stroke:#d32f2f;stroke-width:2}"
        ".inset-text{font:12px sans-serif}</style>\n";

  os << "  <rect class=\"pitch\" x=\"" << num(px(0)) << "\" y=\"" << num(py(0)) << "\" width=\""
     << num(pitch::kLength * kScale) << "\" height=\"" << num(pitch::kWidth * kScale)
     << "\"/>\n";
  line(os, {60, 0}, {60, 80}, "markings");
  line(os, {102, 18}, {120, 18}, "markings");
  line(os, {102, 62}, {120, 62}, "markings");
  line(os, {102, 18}, {102, 62}, "markings");
  line(os, pitch::kLeftPost, pitch::kRightPost, "goal");

  if (s.shooter.x < pitch::kLength) {
    os << "  <polygon class=\"zone\" points=\"" << num(px(s.shooter.x)) << ","
       << num(py(s.shooter.y)) << " " << num(px(pitch::kBoxLeft.x)) << ","
       << num(py(pitch::kBoxLeft.y)) << " " << num(px(pitch::kBoxRight.x)) << ","
       << num(py(pitch::kBoxRight.y)) << "\"/>\n";
  }

  // p_on labels keyed by player index; -1 is the shooter.
  std::map<int, double> p_on;
  if (response.is_object() && response.contains("breakdowns")) {
    for (const auto& b : response.at("breakdowns")) {
      p_on[b.at("player_index").get<int>()] = b.at("p_on").get<double>();
    }
  }
  auto label_for = [&](int index, const std::string& name) {
    std::string label = name;
    if (const auto it = p_on.find(index); it != p_on.end()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", it->second);
      label += (label.empty() ? "" : " ") + std::string(buf);
    }
    return label;
  };

  for (std::size_t i = 0; i < s.players.size(); ++i) {
    const auto& p = s.players[i];
    const std::string cls = p.keeper ? "keeper" : p.teammate ? "teammate" : "defender";
    marker(os, p.location, cls, label_for(static_cast<int>(i), p.label),
           static_cast<int>(i));
  }
  marker(os, s.shooter, "shooter", label_for(-1, "Shooter"), -1);

  // Inset: block probability against theta over the feasible span.
  const double ox = kMargin + 40.0;
  const double oy = pitch_h + kMargin;
  os << "  <g class=\"inset\">\n";
  os << "    <line class=\"axis\" x1=\"" << num(ox) << "\" y1=\"" << num(oy + kInsetH)
     << "\" x2=\"" << num(ox + kInsetW) << "\" y2=\"" << num(oy + kInsetH) << "\"/>\n";
  os << "    <line class=\"axis\" x1=\"" << num(ox) << "\" y1=\"" << num(oy) << "\" x2=\""
     << num(ox) << "\" y2=\"" << num(oy + kInsetH) << "\"/>\n";
  os << "    <text class=\"inset-text\" x=\"" << num(ox) << "\" y=\"" << num(oy - 4)
     << "\">P(block | theta)</text>\n";
  if (response.is_object() && response.contains("theory_block_curve")) {
    const auto& curve = response.at("theory_block_curve");
    if (!curve.empty()) {
      const double span = curve.back().at("theta").get<double>();
      double top = 0.0;
      for (const auto& pt : curve) top = std::max(top, pt.at("p_block").get<double>());
      if (top <= 0.0) top = 1.0;
      os << "    <polyline class=\"curve\" data-theta-min=\""
         << num(curve.front().at("theta").get<double>()) << "\" data-theta-max=\"" << num(span)
         << "\" points=\"";
      for (std::size_t k = 0; k < curve.size(); ++k) {
        const double t = curve[k].at("theta").get<double>();
        const double p = curve[k].at("p_block").get<double>();
        const double x = ox + (span > 0 ? t / span : 0.0) * kInsetW;
        const double y = oy + kInsetH - p / top * kInsetH;
        os << (k ? " " : "") << num(x) << "," << num(y);
      }
      os << "\"/>\n";
      os << "    <text class=\"inset-text\" x=\"" << num(ox + kInsetW - 60) << "\" y=\""
         << num(oy + kInsetH + 16) << "\">n = " << num(span) << "</text>\n";
    }
  }
  os << "  </g>\n</svg>\n";
  return os.str();
}

void write_scenario_svg(const Scenario& s, const Json& response,
                        const std::filesystem::path& out) {
  std::error_code ec;
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path(), ec);
  std::ofstream f(out, std::ios::binary);
  if (!f) throw DataError("cannot write " + out.string());
  f << render_scenario_svg(s, response);
  if (!f) throw DataError("failed writing " + out.string());
}

}  // namespace shotgame
