#include "dirac/config.hpp"
#include "dirac/error.hpp"
#include "dirac/report.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <locale>

using namespace dirac;

namespace {

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

// Runs f with a global locale that writes 1.234,5 for 1234.5.
template <typename F>
auto with_comma_locale(F f) {
  const std::locale saved = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  auto out = f();
  std::locale::global(saved);
  return out;
}

SweepReport sample_sweep() {
  SweepReport r;
  r.potential_label = "loss-yau";
  r.couplings = {0.25, 0.5, 0.75, 1.0, 1.25};
  r.sigma_min = {0.31, 0.2, 0.09, 0.0004, 0.11};
  r.decay_slope = {-0.3, -0.4, -0.9, -1.9, -0.8};
  r.is_crossing = {false, false, false, true, false};
  r.converged = {true, true, true, true, true};
  r.crossings = {{1.0, 1.0}};
  r.lipschitz = 0.4;
  r.discriminator.sigma_threshold = 0.006;
  return r;
}

DecayFit sample_fit() {
  DecayFit f;
  f.shell_radius = {5, 7, 9, 12, 15, 18, 21, 25};
  for (double r : f.shell_radius) f.shell_sup.push_back(1.0 / (r * r));
  f.slope = -2.0;
  f.intercept = 0.0;
  f.r_window = {5, 25};
  f.shells = 8;
  return f;
}

AsymptoticReport sample_asymptotic() {
  AsymptoticReport r;
  r.sphere_samples = {Vec3R(0, 0, 1), Vec3R(1, 0, 0)};
  r.radii = {10, 20};
  for (std::size_t w = 0; w < 2; ++w) r.u_values.push_back(Eigen::Vector2cd(cplx(0, 1), cplx(0.5, 0)));
  r.field_values = {{r.u_values[0] * 1.1, r.u_values[1] * 1.1}, {r.u_values[0] * 1.02, r.u_values[1] * 1.02}};
  r.rel_error = {{0.1, 0.1}, {0.02, 0.02}};
  r.max_rel_error_per_radius = {0.1, 0.02};
  r.uniformity_spread = 0.02;
  r.mean_error_at_largest = 0.02;
  return r;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("number formatting round-trips and ignores the locale") {
  for (double v : {0.0, -0.0, 1.0, 0.1, 1e-300, 6.02214076e23, -2.5e-7, 1.0 / 3.0}) {
    CHECK(parse_number(format_number(v)) == v);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_fixed(1234.5, 2) == "1234.50");
  CHECK(with_comma_locale([] { return format_number(1234.5); }) == "1234.5");
  CHECK(with_comma_locale([] { return format_fixed(1234.5, 1); }) == "1234.5");
  CHECK_THROWS_AS(parse_number("1,5"), Error);
  CHECK_THROWS_AS(parse_number(""), Error);
  CHECK_THROWS_AS(parse_number("2x"), Error);
}

TEST_CASE("csv quoting follows rfc 4180") {
  CHECK(CsvTable::quote("plain") == "plain");
  CHECK(CsvTable::quote("a,b") == "\"a,b\"");
  CHECK(CsvTable::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(CsvTable::quote("two\nlines") == "\"two\nlines\"");
  CHECK(CsvTable::quote("") == "");

  CsvTable t({"name", "value"});
  t.add_row({"x,y", "1"});
  t.add_row({"q\"", "2"});
  CHECK(t.rows() == 2);
  CHECK(t.str() == "name,value\r\n\"x,y\",1\r\n\"q\"\"\",2\r\n");
  CHECK_THROWS_AS(t.add_row({"only one"}), Error);
  CHECK_THROWS_AS(CsvTable({}), Error);
}

TEST_CASE("text documents") {
  TextDocument d;
  d.set("", "title", "top");
  d.set("b", "x", 1.5);
  d.set("a", "flag", true);
  d.set("a", "count", 3);
  d.set("b", "x", 2.5);  // overwrite keeps the position
  CHECK(d.get("b", "x") == "2.5");
  CHECK(d.has("a", "flag"));
  CHECK_FALSE(d.has("a", "missing"));
  CHECK_THROWS_AS(d.get("a", "missing"), Error);
  CHECK(d.sections().size() == 3);
  CHECK(d.sections()[1].first == "b");

  const std::string text = d.serialize();
  CHECK(text.find("title") < text.find("[b]"));
  CHECK(text.find("[b]") < text.find("[a]"));
  CHECK(TextDocument::parse(text) == d);
  CHECK(TextDocument::parse(text).serialize() == text);

  CHECK_THROWS_AS(d.set("a", "bad=key", "v"), Error);
  CHECK_THROWS_AS(d.set("a", " padded", "v"), Error);
  CHECK_THROWS_AS(d.set("a", "k", "multi\nline"), Error);
  CHECK_THROWS_AS(TextDocument::parse("[unterminated\nx = 1\n"), Error);
}

TEST_CASE("configuration round trip") {
  RunConfig c;
  c.command = Command::Sweep;
  c.potential = "bump";
  c.potential_params = {0, 0, 0, 2.5, 1, 0, -1};
  c.n = 31;
  c.L = 30.0;
  c.seed = 18446744073709551615ull;
  c.target_sign = -1;
  c.radii = {5, 7.5, 11};
  c.scales = {0.1, 0.3, 1};
  c.t_step = 0.1;
  c.plots = false;
  const std::string text = serialize(c);
  const RunConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize(back) == text);
  CHECK(parse_config("") == RunConfig{});
  CHECK(parse_config("[lattice]\nn = 31\n").n == 31);
  CHECK_THROWS_AS(parse_config("[lattice]\nsize = 31\n"), Error);
  CHECK_THROWS_AS(parse_config("[lattice]\nn = thirty\n"), Error);
  CHECK_THROWS_AS(parse_config("[run]\ncommand = explode\n"), Error);
  CHECK_THROWS_AS(parse_config("[eigensolver]\ntarget = 0\n"), Error);
}

TEST_CASE("configuration validation names the parameter") {
  auto message = [](RunConfig c) -> std::string {
    try {
      validate(c);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Validation);
      return e.what();
    }
    return "";
  };
  RunConfig c;
  CHECK(message(c).empty());
  c.n = 64;
  CHECK(message(c).find("'n'") != std::string::npos);
  c = RunConfig{};
  c.L = -1;
  CHECK(message(c).find("'L'") != std::string::npos);
  c = RunConfig{};
  c.radii = {10, 5};
  CHECK(message(c).find("'radii'") != std::string::npos);
  c = RunConfig{};
  c.command = Command::Threshold;
  c.mass = 0.0;
  CHECK(message(c).find("'mass'") != std::string::npos);
}

TEST_CASE("coupling grid and hash") {
  RunConfig c;
  const auto t = coupling_grid(c);
  REQUIRE(t.size() == 11);
  CHECK(t.front() == 0.25);
  CHECK(t.back() == doctest::Approx(1.5));
  CHECK(std::find(t.begin(), t.end(), 1.0) != t.end());

  const std::string h = config_hash(c);
  CHECK(h.size() == 64);
  RunConfig moved = c;
  moved.output_dir = "elsewhere";
  CHECK(config_hash(moved) == h);
  RunConfig changed = c;
  changed.seed += 1;
  CHECK(config_hash(changed) != h);

  const TextDocument m = manifest(c);
  CHECK(m.get("manifest", "config_sha256") == h);
  CHECK(m.get("manifest", "seed") == std::to_string(c.seed));
  CHECK(m.has("versions", "eigen"));
  CHECK(m.has("versions", "fft"));
  CHECK(m.get("config.lattice", "n") == "63");
}

TEST_CASE("csv and svg outputs are byte-stable") {
  const SweepReport s = sample_sweep();
  const DecayFit f = sample_fit();
  const AsymptoticReport a = sample_asymptotic();

  const std::string csv1 = sweep_csv(s).str();
  CHECK(csv1.rfind("t,sigma_min,is_crossing\r\n", 0) == 0);
  CHECK(csv1 == sweep_csv(s).str());
  CHECK(with_comma_locale([&] { return sweep_csv(s).str(); }) == csv1);
  CHECK(with_comma_locale([&] { return decay_csv(f).str(); }) == decay_csv(f).str());
  CHECK(with_comma_locale([&] { return asymptotic_csv(a).str(); }) == asymptotic_csv(a).str());

  for (const std::string& svg : {decay_plot(f, "mode"), sweep_plot(s), asymptotic_plot(a)}) {
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("width=\"800\"") != std::string::npos);
    CHECK(svg.find("height=\"600\"") != std::string::npos);
  }
  CHECK(decay_plot(f, "mode") == decay_plot(f, "mode"));
  CHECK(with_comma_locale([&] { return decay_plot(f, "mode"); }) == decay_plot(f, "mode"));
  CHECK(with_comma_locale([&] { return sweep_plot(s); }) == sweep_plot(s));
  CHECK(with_comma_locale([&] { return asymptotic_plot(a); }) == asymptotic_plot(a));
  // titles are escaped
  CHECK(decay_plot(f, "a<b & c").find("a&lt;b &amp; c") != std::string::npos);
}

TEST_CASE("empty reports raise no-data") {
  auto kind_of = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind_of([] { return decay_plot(DecayFit{}, "x"); }) == ErrorKind::NoData);
  CHECK(kind_of([] { return sweep_plot(SweepReport{}); }) == ErrorKind::NoData);
  CHECK(kind_of([] { return asymptotic_plot(AsymptoticReport{}); }) == ErrorKind::NoData);
}

TEST_CASE("report documents") {
  const TextDocument d = sweep_document(sample_sweep());
  CHECK(TextDocument::parse(d.serialize()) == d);
  DirectSumReport ds;
  ds.upper_norm = 1.0;
  ds.verdict = Verdict::Consistent;
  const TextDocument dd = direct_sum_document(ds);
  CHECK(TextDocument::parse(dd.serialize()) == dd);
}

TEST_CASE("text files") {
  const auto path = std::filesystem::temp_directory_path() / "dirac_report_text.txt";
  write_text_file(path, "a\r\nb\n");
  CHECK(read_text_file(path) == "a\r\nb\n");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_text_file("/nonexistent/file"), Error);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/file", "x"), Error);
}

}
