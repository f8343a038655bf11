#include "adhdp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "adhdp/errors.hpp"

namespace adhdp {

namespace fs = std::filesystem;

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

void dump_matrix(std::ostringstream& out, const char* name, const Matrix<double>& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%a", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace

std::string trial_csv(const TrialRecord& trial, PlantKind plant) {
  std::ostringstream out;
  out << 't';
  for (const auto& name : state_column_names(plant)) out << ',' << name;
  out << ",u,applied,r,j_hat,e_c,e_a,lc_bound,la_bound\n";
  for (const auto& row : trial.rows) {
    out << row.t;
    for (double v : row.state) out << ',' << format_value(v);
    for (double v : {row.u, row.applied, row.reward, row.j_hat, row.e_c, row.e_a, row.lc_bound, row.la_bound})
      out << ',' << format_value(v);
    out << '\n';
  }
  return out.str();
}

std::vector<fs::path> emit_csv(const RunRecord& record, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

  std::vector<fs::path> written;
  std::ostringstream summary;
  summary << "trial,steps_survived,failure_cause,succeeded\n";
  for (const auto& trial : record.trials)
    summary << trial.trial_index << ',' << trial.steps_survived << ',' << to_string(trial.failure_cause) << ','
            << (trial.succeeded ? 1 : 0) << '\n';
  written.push_back(dir / "run_summary.csv");
  write_file(written.back(), summary.str());

  for (const auto& trial : record.trials) {
    written.push_back(dir / ("trial_" + std::to_string(trial.trial_index) + ".csv"));
    write_file(written.back(), trial_csv(trial, record.plant));
  }
  if (!record.trials.empty()) {
    written.push_back(dir / "evaluation.csv");
    write_file(written.back(), trial_csv(record.evaluation, record.plant));
  }
  return written;
}

std::string serialize_weights(const LearnerState<double>& learner) {
  std::ostringstream out;
  dump_matrix(out, "critic.w1", learner.critic.w1);
  dump_matrix(out, "critic.w2", learner.critic.w2);
  dump_matrix(out, "action.w1", learner.action.w1);
  dump_matrix(out, "action.w2", learner.action.w2);
  return out.str();
}

std::string serialize_hidden_weights(const LearnerState<double>& learner) {
  std::ostringstream out;
  dump_matrix(out, "critic.w1", learner.critic.w1);
  dump_matrix(out, "action.w1", learner.action.w1);
  return out.str();
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("CSV has no column named '" + name + "'");
  return std::size_t(it - header.begin());
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV '" + path.string() + "' is empty");
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream rs(line);
    std::string cell;
    while (std::getline(rs, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      row.push_back(end && *end == '\0' && !cell.empty() ? v : std::numeric_limits<double>::quiet_NaN());
    }
    row.resize(table.header.size(), std::numeric_limits<double>::quiet_NaN());
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_svg(const CsvTable& table, const std::vector<std::string>& columns, const std::string& title) {
  if (columns.empty()) throw ConfigError("plot needs at least one column");
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(table.column(c));

  constexpr double W = 800, H = 420, left = 70, right = 20, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& row : table.rows) {
    if (std::isfinite(row[0])) xmin = std::min(xmin, row[0]), xmax = std::max(xmax, row[0]);
    for (auto i : idx)
      if (std::isfinite(row[i])) ymin = std::min(ymin, row[i]), ymax = std::max(ymax, row[i]);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 0;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymin -= 1, ymax += 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << fixed2(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << xml_escape(title) << "</text>\n";

  // Frame, zero line and tick labels.
  out << "<rect x=\"" << fixed2(left) << "\" y=\"" << fixed2(top) << "\" width=\"" << fixed2(pw) << "\" height=\""
      << fixed2(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (ymin <= 0 && ymax >= 0)
    out << "<line x1=\"" << fixed2(left) << "\" y1=\"" << fixed2(sy(0)) << "\" x2=\"" << fixed2(left + pw)
        << "\" y2=\"" << fixed2(sy(0)) << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    out << "<text x=\"" << fixed2(left - 6) << "\" y=\"" << fixed2(sy(yv) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_value(yv) << "</text>\n";
    out << "<text x=\"" << fixed2(sx(xv)) << "\" y=\"" << fixed2(top + ph + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_value(xv) << "</text>\n";
  }
  out << "<text x=\"" << fixed2(left + pw / 2) << "\" y=\"" << fixed2(H - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(table.header[0])
      << "</text>\n";

  for (std::size_t c = 0; c < idx.size(); ++c) {
    const char* color = palette[c % std::size(palette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& row : table.rows) {
      if (!std::isfinite(row[0]) || !std::isfinite(row[idx[c]])) continue;
      out << (first ? "" : " ") << fixed2(sx(row[0])) << ',' << fixed2(sy(row[idx[c]]));
      first = false;
    }
    out << "\"/>\n";
  }

  // Legend.
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const double ly = top + 14 + 16 * double(c);
    out << "<line x1=\"" << fixed2(left + pw - 120) << "\" y1=\"" << fixed2(ly) << "\" x2=\""
        << fixed2(left + pw - 100) << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << palette[c % std::size(palette)]
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << fixed2(left + pw - 94) << "\" y=\"" << fixed2(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(columns[c]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_plot(const fs::path& csv_path, const std::vector<std::string>& columns, const fs::path& out_path,
               const std::string& title) {
  const CsvTable table = read_csv(csv_path);
  const std::string svg = render_svg(table, columns, title.empty() ? csv_path.filename().string() : title);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_file(out_path, svg);
}

}  // namespace adhdp
