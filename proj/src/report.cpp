#include "dirac/report.hpp"

#include "dirac/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace dirac {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
  if (!std::isfinite(v)) return format_number(v);
  char buf[128];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) fail(ErrorKind::Configuration, "not a number: '" + text + "'");
  return v;
}

// ---------------------------------------------------------------- CSV

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) fail(ErrorKind::InvalidParameter, "CSV header must not be empty");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    fail(ErrorKind::InvalidParameter, "CSV row has " + std::to_string(row.size()) + " fields, header has " +
                                          std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += quote(fields[i]);
    }
    out += "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

// ---------------------------------------------------------------- text documents

void TextDocument::set(const std::string& section, const std::string& key, const std::string& value) {
  // the INI reader trims keys, so surrounding blanks would not round-trip
  if (key.empty() || key.find_first_of("=[]\r\n;#") != std::string::npos || key != std::string(key.c_str()) ||
      std::isspace(static_cast<unsigned char>(key.front())) || std::isspace(static_cast<unsigned char>(key.back()))) {
    fail(ErrorKind::InvalidParameter, "invalid document key '" + key + "'");
  }
  if (section.find_first_of("[]\r\n") != std::string::npos) fail(ErrorKind::InvalidParameter, "invalid section name");
  if (value.find_first_of("\r\n") != std::string::npos) fail(ErrorKind::InvalidParameter, "document values are single-line");
  auto sec = std::find_if(sections_.begin(), sections_.end(), [&](const auto& s) { return s.first == section; });
  if (sec == sections_.end()) {
    if (section.empty()) {
      sections_.insert(sections_.begin(), {section, {}});
      sec = sections_.begin();
    } else {
      sections_.push_back({section, {}});
      sec = std::prev(sections_.end());
    }
  }
  auto entry = std::find_if(sec->second.begin(), sec->second.end(), [&](const auto& e) { return e.first == key; });
  if (entry == sec->second.end()) {
    sec->second.emplace_back(key, value);
  } else {
    entry->second = value;
  }
}

bool TextDocument::has(const std::string& section, const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& e : entries)
      if (e.first == key) return true;
  }
  return false;
}

const std::string& TextDocument::get(const std::string& section, const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& e : entries)
      if (e.first == key) return e.second;
  }
  fail(ErrorKind::Configuration, "missing key '" + key + "' in section [" + section + "]");
}

std::string TextDocument::serialize() const {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  for (const auto& [name, entries] : sections_) {
    if (name.empty()) {
      for (const auto& [k, v] : entries) tree.push_back({k, pt::ptree(v)});
    }
  }
  for (const auto& [name, entries] : sections_) {
    if (name.empty() || entries.empty()) continue;
    pt::ptree& sec = tree.push_back({name, pt::ptree()})->second;
    for (const auto& [k, v] : entries) sec.push_back({k, pt::ptree(v)});
  }
  std::ostringstream os;
  pt::write_ini(os, tree);
  return os.str();
}

TextDocument TextDocument::parse(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::Configuration, std::string("malformed configuration text: ") + e.what());
  }
  TextDocument doc;
  for (const auto& [name, node] : tree) {
    if (node.empty()) doc.set("", name, node.data());
  }
  for (const auto& [name, node] : tree) {
    if (node.empty()) continue;
    for (const auto& [k, v] : node) {
      if (!v.empty()) fail(ErrorKind::Configuration, "nested sections are not supported");
      doc.set(name, k, v.data());
    }
  }
  return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------- report documents

namespace {

void grid_entries(TextDocument& doc, const std::string& section, const Grid& g) {
  doc.set(section, "grid_n", g.n());
  doc.set(section, "grid_L", g.extent());
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_number(v[i]);
  }
  return out;
}

}  // namespace

TextDocument decay_document(const std::string& label, const DecayReport& r) {
  TextDocument doc;
  doc.set("potential", "label", label);
  doc.set("A1", "satisfied", r.a1_satisfied);
  doc.set("A1", "compact_support", r.compact_support);
  if (r.a1) {
    doc.set("A1", "rho", r.a1->rho);
    doc.set("A1", "constant", r.a1->constant);
  }
  doc.set("A2", "satisfied", r.a2_satisfied);
  doc.set("A3", "finite", std::isfinite(r.a3_norm));
  doc.set("A3", "norm", r.a3_norm);
  doc.set("norms", "sup_weighted", r.sup_norm_weighted);
  doc.set("norms", "probe_radius_max", r.probe_radius_max);
  doc.set("shells", "radius", join(r.shell_radii));
  doc.set("shells", "sup", join(r.shell_sup));
  return doc;
}

TextDocument kernel_document(const KernelReport& r) {
  TextDocument doc;
  doc.set("kernel", "potential", r.potential_label);
  grid_entries(doc, "kernel", r.grid);
  doc.set("kernel", "seed", std::to_string(r.seed));
  doc.set("kernel", "iterations", r.iterations);
  doc.set("kernel", "converged", r.converged);
  doc.set("kernel", "deflated_constants", r.deflated_constants);
  doc.set("kernel", "sigma_threshold", r.discriminator.sigma_threshold);
  doc.set("kernel", "max_slope", r.discriminator.max_slope);
  doc.set("kernel", "detected_dim", r.detected_dim);
  for (std::size_t i = 0; i < r.singular_values.size(); ++i) {
    const std::string sec = "mode." + std::to_string(i + 1);
    doc.set(sec, "sigma", r.singular_values[i]);
    doc.set(sec, "residual", r.residuals[i]);
    doc.set(sec, "decay_slope", r.decay_slopes[i]);
    doc.set(sec, "zero_mode", static_cast<bool>(r.zero_mode[i]));
  }
  return doc;
}

TextDocument eigen_document(const EigenReport& r) {
  TextDocument doc;
  doc.set("eigen", "potential", r.potential_label);
  grid_entries(doc, "eigen", r.grid);
  doc.set("eigen", "mass", r.mass);
  doc.set("eigen", "target", r.target);
  doc.set("eigen", "seed", std::to_string(r.seed));
  doc.set("eigen", "iterations", r.iterations);
  doc.set("eigen", "converged", r.converged);
  doc.set("eigen", "sigma_threshold", r.discriminator.sigma_threshold);
  doc.set("eigen", "detected_dim", r.detected_dim);
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    const std::string sec = "pair." + std::to_string(i + 1);
    doc.set(sec, "eigenvalue", r.eigenvalues[i]);
    doc.set(sec, "residual", r.residuals[i]);
    doc.set(sec, "effective_sigma", r.effective_sigma[i]);
    doc.set(sec, "decay_slope", r.decay_slopes[i]);
    doc.set(sec, "threshold_mode", static_cast<bool>(r.threshold_mode[i]));
  }
  return doc;
}

TextDocument direct_sum_document(const DirectSumReport& r) {
  TextDocument doc;
  doc.set("direct_sum", "upper_norm", r.upper_norm);
  doc.set("direct_sum", "lower_norm", r.lower_norm);
  doc.set("direct_sum", "minor_ratio", r.minor_ratio);
  doc.set("direct_sum", "dominant_block", r.upper_dominant ? "upper" : "lower");
  doc.set("direct_sum", "kernel_overlap", r.kernel_overlap);
  doc.set("direct_sum", "kernel_dim", r.kernel_dim);
  doc.set("direct_sum", "verdict", to_string(r.verdict));
  return doc;
}

TextDocument asymptotic_document(const AsymptoticReport& r) {
  TextDocument doc;
  doc.set("asymptotic", "sphere_n", static_cast<int>(r.sphere_samples.size()));
  doc.set("asymptotic", "tail_fraction", r.tail_fraction);
  doc.set("asymptotic", "radii", join(r.radii));
  doc.set("asymptotic", "max_rel_error", join(r.max_rel_error_per_radius));
  doc.set("asymptotic", "uniformity_spread", r.uniformity_spread);
  doc.set("asymptotic", "mean_error_at_largest", r.mean_error_at_largest);
  return doc;
}

TextDocument probe_document(const ProbeReport& r) {
  TextDocument doc;
  doc.set("probe", "base", r.base_label);
  grid_entries(doc, "probe", r.grid);
  doc.set("probe", "epsilon", r.epsilon);
  doc.set("probe", "trials", r.trials);
  doc.set("probe", "seed", std::to_string(r.seed));
  doc.set("probe", "detected", r.detected);
  doc.set("probe", "kernel_fraction", r.kernel_fraction);
  for (std::size_t i = 0; i < r.sigma.size(); ++i) {
    const std::string sec = "trial." + std::to_string(i + 1);
    doc.set(sec, "sigma", r.sigma[i]);
    doc.set(sec, "decay_slope", r.slope[i]);
    doc.set(sec, "zero_mode", static_cast<bool>(r.zero_mode[i]));
    doc.set(sec, "converged", static_cast<bool>(r.converged[i]));
  }
  return doc;
}

TextDocument dim_bound_document(const std::vector<DimBoundRecord>& records) {
  TextDocument doc;
  doc.set("study", "potentials", static_cast<int>(records.size()));
  doc.set("study", "empirical_constant", empirical_dim_constant(records));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string sec = "record." + std::to_string(i + 1);
    doc.set(sec, "potential", r.potential_label);
    doc.set(sec, "a3_cubed", r.a3_cubed);
    doc.set(sec, "detected_dim", r.detected_dim);
    doc.set(sec, "dim_plus_m", r.dim_plus);
    doc.set(sec, "dim_minus_m", r.dim_minus);
    doc.set(sec, "ratio", r.ratio);
    doc.set(sec, "converged", r.converged);
  }
  return doc;
}

TextDocument sweep_document(const SweepReport& r) {
  TextDocument doc;
  doc.set("sweep", "potential", r.potential_label);
  grid_entries(doc, "sweep", r.grid);
  doc.set("sweep", "samples", static_cast<int>(r.couplings.size()));
  doc.set("sweep", "crossings", static_cast<int>(r.crossings.size()));
  doc.set("sweep", "lipschitz", r.lipschitz);
  doc.set("sweep", "jump_flags", static_cast<int>(r.jump_flags.size()));
  for (std::size_t i = 0; i < r.crossings.size(); ++i) {
    const std::string sec = "crossing." + std::to_string(i + 1);
    doc.set(sec, "t_low", r.crossings[i].first);
    doc.set(sec, "t_high", r.crossings[i].second);
  }
  return doc;
}

CsvTable sweep_csv(const SweepReport& r) {
  CsvTable t({"t", "sigma_min", "is_crossing"});
  for (std::size_t i = 0; i < r.couplings.size(); ++i) {
    t.add_row({format_number(r.couplings[i]), format_number(r.sigma_min[i]), r.is_crossing[i] ? "1" : "0"});
  }
  return t;
}

CsvTable asymptotic_csv(const AsymptoticReport& r) {
  const std::size_t comps = r.u_values.empty() ? 0 : static_cast<std::size_t>(r.u_values.front().size());
  std::vector<std::string> header{"omega_x", "omega_y", "omega_z", "r"};
  for (std::size_t c = 0; c < comps; ++c) {
    header.push_back("field" + std::to_string(c + 1) + "_re");
    header.push_back("field" + std::to_string(c + 1) + "_im");
  }
  for (std::size_t c = 0; c < comps; ++c) {
    header.push_back("u" + std::to_string(c + 1) + "_re");
    header.push_back("u" + std::to_string(c + 1) + "_im");
  }
  header.push_back("rel_error");
  CsvTable t(header);
  for (std::size_t ri = 0; ri < r.radii.size(); ++ri) {
    for (std::size_t w = 0; w < r.sphere_samples.size(); ++w) {
      const Vec3R& om = r.sphere_samples[w];
      std::vector<std::string> row{format_number(om(0)), format_number(om(1)), format_number(om(2)),
                                   format_number(r.radii[ri])};
      for (std::size_t c = 0; c < comps; ++c) {
        row.push_back(format_number(r.field_values[ri][w](static_cast<Eigen::Index>(c)).real()));
        row.push_back(format_number(r.field_values[ri][w](static_cast<Eigen::Index>(c)).imag()));
      }
      for (std::size_t c = 0; c < comps; ++c) {
        row.push_back(format_number(r.u_values[w](static_cast<Eigen::Index>(c)).real()));
        row.push_back(format_number(r.u_values[w](static_cast<Eigen::Index>(c)).imag()));
      }
      row.push_back(format_number(r.rel_error[ri][w]));
      t.add_row(std::move(row));
    }
  }
  return t;
}

CsvTable decay_csv(const DecayFit& fit) {
  CsvTable t({"r", "shell_sup", "fit"});
  for (std::size_t i = 0; i < fit.shell_radius.size(); ++i) {
    const double r = fit.shell_radius[i];
    t.add_row({format_number(r), format_number(fit.shell_sup[i]),
               format_number(std::exp(fit.intercept + fit.slope * std::log(r)))});
  }
  return t;
}

// ---------------------------------------------------------------- SVG

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 90.0, kRight = 30.0, kTop = 50.0, kBottom = 70.0;

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double unit(double v) const {
    if (log) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return (v - lo) / (hi - lo);
  }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (int e = static_cast<int>(std::floor(std::log10(lo))); e <= static_cast<int>(std::ceil(std::log10(hi))); ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
      }
      if (out.size() < 2) out = {lo, hi};
    } else {
      for (int i = 0; i <= 5; ++i) out.push_back(lo + (hi - lo) * i / 5.0);
    }
    return out;
  }
};

Axis make_axis(const std::vector<double>& values, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && !(v > 0.0))) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) fail(ErrorKind::NoData, "no plottable values");
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10.0;
  } else {
    const double pad = hi > lo ? 0.05 * (hi - lo) : 0.5 * std::max(1.0, std::abs(lo));
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::string tick_label(double v, bool log) {
  if (log) {
    const double e = std::log10(v);
    if (std::abs(e - std::round(e)) < 1e-9) return "1e" + std::to_string(static_cast<int>(std::round(e)));
  }
  return format_fixed(v, std::abs(v) >= 10 ? 1 : 3);
}

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

class Plot {
 public:
  Plot(std::string title, std::string xlabel, std::string ylabel, Axis x, Axis y)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), x_(x), y_(y) {}

  double px(double v) const { return kLeft + x_.unit(v) * (kWidth - kLeft - kRight); }
  double py(double v) const { return kHeight - kBottom - y_.unit(v) * (kHeight - kTop - kBottom); }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color,
                bool dashed = false) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!visible(xs[i], ys[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += format_fixed(px(xs[i]), 2) + "," + format_fixed(py(ys[i]), 2);
    }
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"" +
             (dashed ? std::string(" stroke-dasharray=\"8 5\"") : std::string()) + " points=\"" + pts + "\"/>\n";
  }

  void markers(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<bool>& highlight,
               const std::string& color, const std::string& highlight_color) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!visible(xs[i], ys[i])) continue;
      const bool hi = i < highlight.size() && highlight[i];
      body_ += "<circle cx=\"" + format_fixed(px(xs[i]), 2) + "\" cy=\"" + format_fixed(py(ys[i]), 2) + "\" r=\"" +
               (hi ? "6" : "4") + "\" fill=\"" + (hi ? highlight_color : color) + "\"/>\n";
    }
  }

  void hline(double y, const std::string& color, const std::string& label) {
    if (!(y_.unit(y) >= 0.0 && y_.unit(y) <= 1.0)) return;
    const std::string yy = format_fixed(py(y), 2);
    body_ += "<line x1=\"" + format_fixed(kLeft, 2) + "\" y1=\"" + yy + "\" x2=\"" + format_fixed(kWidth - kRight, 2) +
             "\" y2=\"" + yy + "\" stroke=\"" + color + "\" stroke-dasharray=\"4 4\"/>\n";
    body_ += "<text x=\"" + format_fixed(kWidth - kRight - 4, 2) + "\" y=\"" + format_fixed(py(y) - 6, 2) +
             "\" text-anchor=\"end\" font-size=\"13\" fill=\"" + color + "\">" + escape(label) + "</text>\n";
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& items) {
    double y = kTop + 20;
    for (const auto& [color, text] : items) {
      body_ += "<rect x=\"" + format_fixed(kWidth - kRight - 220, 2) + "\" y=\"" + format_fixed(y - 10, 2) +
               "\" width=\"14\" height=\"4\" fill=\"" + color + "\"/>\n";
      body_ += "<text x=\"" + format_fixed(kWidth - kRight - 200, 2) + "\" y=\"" + format_fixed(y - 4, 2) +
               "\" font-size=\"13\">" + escape(text) + "</text>\n";
      y += 20;
    }
  }

  std::string str() const {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\" "
         "font-family=\"sans-serif\">\n";
    s += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    s += "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">" + escape(title_) + "</text>\n";
    const std::string x0 = format_fixed(kLeft, 2), x1 = format_fixed(kWidth - kRight, 2);
    const std::string y0 = format_fixed(kHeight - kBottom, 2), y1 = format_fixed(kTop, 2);
    s += "<rect x=\"" + x0 + "\" y=\"" + y1 + "\" width=\"" + format_fixed(kWidth - kLeft - kRight, 2) +
         "\" height=\"" + format_fixed(kHeight - kTop - kBottom, 2) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : x_.ticks()) {
      const std::string xx = format_fixed(px(t), 2);
      s += "<line x1=\"" + xx + "\" y1=\"" + y0 + "\" x2=\"" + xx + "\" y2=\"" + format_fixed(kHeight - kBottom + 6, 2) +
           "\" stroke=\"black\"/>\n";
      s += "<text x=\"" + xx + "\" y=\"" + format_fixed(kHeight - kBottom + 22, 2) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + tick_label(t, x_.log) + "</text>\n";
    }
    for (double t : y_.ticks()) {
      const std::string yy = format_fixed(py(t), 2);
      s += "<line x1=\"" + format_fixed(kLeft - 6, 2) + "\" y1=\"" + yy + "\" x2=\"" + x0 + "\" y2=\"" + yy +
           "\" stroke=\"black\"/>\n";
      s += "<text x=\"" + format_fixed(kLeft - 10, 2) + "\" y=\"" + format_fixed(py(t) + 4, 2) +
           "\" text-anchor=\"end\" font-size=\"12\">" + tick_label(t, y_.log) + "</text>\n";
    }
    s += "<text x=\"" + format_fixed(0.5 * (kLeft + kWidth - kRight), 2) + "\" y=\"" + format_fixed(kHeight - 20, 2) +
         "\" text-anchor=\"middle\" font-size=\"14\">" + escape(xlabel_) + "</text>\n";
    s += "<text x=\"24\" y=\"" + format_fixed(0.5 * (kTop + kHeight - kBottom), 2) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 24 " +
         format_fixed(0.5 * (kTop + kHeight - kBottom), 2) + ")\">" + escape(ylabel_) + "</text>\n";
    s += body_;
    s += "</svg>\n";
    return s;
  }

 private:
  bool visible(double x, double y) const {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if ((x_.log && !(x > 0.0)) || (y_.log && !(y > 0.0))) return false;
    return x_.unit(x) >= -1e-9 && x_.unit(x) <= 1 + 1e-9 && y_.unit(y) >= -1e-9 && y_.unit(y) <= 1 + 1e-9;
  }

  std::string title_, xlabel_, ylabel_;
  Axis x_, y_;
  std::string body_;
};

}  // namespace

std::string decay_plot(const DecayFit& fit, const std::string& title, double reference_slope) {
  if (fit.shell_radius.empty()) fail(ErrorKind::NoData, "decay plot of an empty fit");
  const Axis x = make_axis(fit.shell_radius, true);
  std::vector<double> fitted, reference;
  const double mid = std::sqrt(fit.shell_radius.front() * fit.shell_radius.back());
  const double mid_value = std::exp(fit.intercept + fit.slope * std::log(mid));
  for (double r : fit.shell_radius) {
    fitted.push_back(std::exp(fit.intercept + fit.slope * std::log(r)));
    reference.push_back(mid_value * std::pow(r / mid, reference_slope));
  }
  std::vector<double> all = fit.shell_sup;
  all.insert(all.end(), reference.begin(), reference.end());
  const Axis y = make_axis(all, true);
  Plot p(title, "r", "shell sup |psi|", x, y);
  p.polyline(fit.shell_radius, reference, "#999999", true);
  p.polyline(fit.shell_radius, fitted, "#1f77b4");
  p.markers(fit.shell_radius, fit.shell_sup, {}, "#d62728", "#d62728");
  p.legend({{"#d62728", "shell sup"},
            {"#1f77b4", "fit, slope " + format_fixed(fit.slope, 3)},
            {"#999999", "reference slope " + format_fixed(reference_slope, 1)}});
  return p.str();
}

std::string sweep_plot(const SweepReport& r) {
  if (r.couplings.empty()) fail(ErrorKind::NoData, "sweep plot of an empty sweep");
  const Axis x = make_axis(r.couplings, false);
  std::vector<double> ys = r.sigma_min;
  ys.push_back(r.discriminator.sigma_threshold);
  const Axis y = make_axis(ys, true);
  Plot p("coupling sweep: " + r.potential_label, "coupling t", "smallest singular value", x, y);
  p.polyline(r.couplings, r.sigma_min, "#1f77b4");
  p.markers(r.couplings, r.sigma_min, r.is_crossing, "#1f77b4", "#d62728");
  p.hline(r.discriminator.sigma_threshold, "#d62728", "zero-mode threshold");
  return p.str();
}

std::string asymptotic_plot(const AsymptoticReport& r) {
  if (r.radii.empty() || r.max_rel_error_per_radius.empty()) fail(ErrorKind::NoData, "asymptotic plot of an empty report");
  const Axis x = make_axis(r.radii, true);
  const Axis y = make_axis(r.max_rel_error_per_radius, true);
  Plot p("convergence of r^2 psi(r omega)", "r", "max relative error over the sphere", x, y);
  p.polyline(r.radii, r.max_rel_error_per_radius, "#1f77b4");
  p.markers(r.radii, r.max_rel_error_per_radius, {}, "#1f77b4", "#1f77b4");
  return p.str();
}

}  // namespace dirac
