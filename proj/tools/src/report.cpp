#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "stripbound/blaschke.hpp"
#include "stripbound/certify.hpp"
#include "stripbound/error.hpp"
#include "stripbound/factorization.hpp"
#include "stripbound/io.hpp"
#include "stripbound/operator.hpp"

#ifndef STRIPBOUND_VERSION
#define STRIPBOUND_VERSION "unknown"
#endif

namespace stripbound::cli {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
    os << '\n';
  }
  write_text(path, os.str());
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series) {
  constexpr double kWidth = 720, kHeight = 440, kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
  constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  bool all_positive = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
      all_positive = all_positive && s.x[i] > 0;
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  const bool log_x = all_positive && xmin > 0 && xmax / xmin > 100.0;
  auto fx = [&](double x) { return log_x ? std::log10(x) : x; };
  double x0 = fx(xmin), x1 = fx(xmax);
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return kLeft + (fx(x) - x0) / (x1 - x0) * (kWidth - kLeft - kRight); };
  auto py = [&](double y) { return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom); };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
     << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    const double xv = log_x ? std::pow(10.0, x0 + t * (x1 - x0)) : x0 + t * (x1 - x0);
    const double yv = ymin + t * (ymax - ymin);
    const double xp = px(xv), yp = py(yv);
    os << "<text x=\"" << xp << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">" << tick(xv)
       << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << yp + 4 << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << yp << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << yp
       << "\" stroke=\"#e0e0e0\"/>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">" << escape(x_label)
     << (log_x ? " (log scale)" : "") << "</text>\n";
  os << "<text x=\"18\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << kHeight / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 5];
    std::ostringstream path;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        pen_down = false;
        continue;
      }
      path << (pen_down ? " L" : " M") << px(s.x[i]) << "," << py(s.y[i]);
      pen_down = true;
      os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 14 * (k + 1) << "\" text-anchor=\"end\" fill=\""
       << color << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

json manifest_json(const RunRecord& run) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream ts;
  ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return {{"schema", io::kSchemaManifest},
          {"command", run.command},
          {"argv", run.argv},
          {"parameters", run.parameters},
          {"constants",
           {{"small_z_constant", blaschke::kSmallZConstant},
            {"harnack_constant", factorization::kHarnackConstant},
            {"det_floor_scale", op::kDetFloorScale},
            {"blaschke_comparison", certify::kBlaschkeComparison},
            {"envelope_slack", certify::kEnvelopeSlack}}},
          {"quadrature", io::to_json(run.quadrature)},
          {"outputs", run.outputs},
          {"version", STRIPBOUND_VERSION},
          {"timestamp", ts.str()}};
}

}  // namespace stripbound::cli
