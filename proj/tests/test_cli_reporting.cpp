#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "excitability/experiment.hpp"

namespace ex = excitability;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("excitability_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Presets, ExactlyFiveAndAllValid) {
  const auto names = ex::list_presets();
  EXPECT_EQ(names.size(), 5u);
  EXPECT_NE(std::find(names.begin(), names.end(), "hh-excitatory"), names.end());
  for (const auto& n : names) {
    const auto c = ex::preset(n);
    EXPECT_EQ(c.name, n);
    EXPECT_NO_THROW(ex::validate(c)) << n;
  }
  EXPECT_THROW(ex::preset("nope"), ex::config_error);
}

TEST(ExperimentConfig, RoundTripsThroughJson) {
  for (const auto& n : ex::list_presets()) {
    const auto c = ex::preset(n);
    const auto text = ex::to_json(c).dump();
    const auto back = ex::parse_config(nlohmann::json::parse(text));
    EXPECT_EQ(back, c) << n;
    EXPECT_EQ(ex::config_hash(back), ex::config_hash(c));
  }
  auto c = ex::preset("fhn");
  c.model = ex::FHNParams{0.0123456789012345, 0.5, 0.4};
  c.tolerances.rel_tol = 1.0 / 3.0 * 1e-7;
  EXPECT_EQ(ex::parse_config(nlohmann::json::parse(ex::to_json(c).dump())), c);
}

TEST(ExperimentConfig, HashTracksContent) {
  auto a = ex::preset("rc-linear");
  auto b = a;
  EXPECT_EQ(ex::config_hash(a), ex::config_hash(b));
  b.rates.count += 1;
  EXPECT_NE(ex::config_hash(a), ex::config_hash(b));
  EXPECT_EQ(ex::hex64(ex::config_hash(a)).size(), 16u);
}

TEST(ExperimentConfig, RejectsInvalidDocuments) {
  const auto good = ex::to_json(ex::preset("rc-linear"));
  auto broken = [&](auto mutate) {
    auto j = good;
    mutate(j);
    return j;
  };
  using J = nlohmann::json;
  EXPECT_THROW(ex::parse_config(J::array()), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["model"]["type"] = "memristor"; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["model"]["R"] = -1.0; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["rates"]["spacing"] = "cubic"; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["rates"]["lo"] = 0.0; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["amplitudes"]["count"] = 1; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["amplitudes"]["count"] = -4; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["amplitudes"]["hi"] = "two"; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j.erase("amplitudes"); })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["ansatz"] = "biexponential"; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["tolerances"]["rel_tol"] = 2.0; })), ex::config_error);
  EXPECT_THROW(ex::parse_config(broken([](J& j) { j["output_dir"] = ""; })), ex::config_error);

  auto cubic = ex::to_json(ex::preset("rc-bistable"));
  cubic["amplitudes"]["hi"] = 4.5;
  EXPECT_THROW(ex::parse_config(cubic), ex::config_error);
}

TEST(ExperimentConfig, PresetFieldsCanBeOverridden) {
  auto j = ex::to_json(ex::preset("hh-excitatory"));
  j.merge_patch(nlohmann::json::parse(R"({"amplitudes": {"count": 30}, "model": {"g_k": 30.0}})"));
  const auto c = ex::parse_config(j);
  EXPECT_EQ(c.amplitudes.count, 30u);
  EXPECT_EQ(std::get<ex::HHParams>(c.model).g_k, 30.0);
  EXPECT_EQ(std::get<ex::HHParams>(c.model).g_na, 120.0);
}

TEST(LandscapeCsv, HeaderRowsAndSentinel) {
  ex::Landscape l;
  l.nodes.resize(3);
  l.nodes[0].amplitude = 0.5;
  l.nodes[0].supply = 0.125;
  l.nodes[0].rate = 2.0;
  l.nodes[1].amplitude = 1.0;
  l.nodes[1].supply = std::numeric_limits<double>::quiet_NaN();
  l.nodes[1].unbounded = true;
  l.nodes[2].amplitude = 0.1;
  l.nodes[2].supply = 0.1;
  const auto rows = lines(ex::landscape_csv(l));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "A,S_r,alpha_star");
  EXPECT_EQ(rows[1], "0.5,0.125,2");
  EXPECT_EQ(rows[2], "1,unbounded,0");
  EXPECT_EQ(rows[3], "0.10000000000000001,0.10000000000000001,0");

  l.inhibitory = true;
  l.nodes[0].inhibition = 2.0;
  l.nodes[0].inhibition_rate = 0.1;
  l.nodes[0].terminal = -1.5;
  const auto inh = lines(ex::landscape_csv(l));
  EXPECT_EQ(inh[0], "A,S_r,alpha_star,B,beta_star,v_terminal");
  EXPECT_EQ(inh[1], "0.5,0.125,2,2,0.10000000000000001,-1.5");
}

TEST(TrajectoryCsv, ColumnsFollowModelState) {
  const ex::ModelSpec hh = ex::HHParams::standard();
  const auto run = ex::run_clamp(hh, ex::ExponentialAnsatz{10.0, 0.5}, {}, true);
  const auto rows = lines(ex::trajectory_csv(*run.supply.samples, 101));
  EXPECT_EQ(rows[0], "t,v,i,m,h,n,cumulative_supply");
  EXPECT_LE(rows.size(), 103u);
  EXPECT_EQ(rows.back().substr(0, 5), "0,10,");

  const ex::ModelSpec fhn = ex::FHNParams{};
  const auto f = ex::run_clamp(fhn, ex::ExponentialAnsatz{1.0, 10.0}, {}, true);
  const auto frows = lines(ex::trajectory_csv(*f.supply.samples));
  EXPECT_EQ(frows[0], "t,v,i,w,cumulative_supply");
  EXPECT_LE(frows.size(), 2003u);
  EXPECT_EQ(frows.back().substr(0, 4), "0,1,");
  const auto all = lines(ex::trajectory_csv(*f.supply.samples, f.supply.samples->t.size()));
  EXPECT_EQ(all.size(), f.supply.samples->t.size() + 1);
}

TEST(SvgPlot, DrawsAxesLabelsAndBrokenLines) {
  ex::PlotSpec p{"title & co", "A", "S_r", {{"s", {0, 1, 2, 3, 4}, {0, 1, NAN, 3, 4}}}, {2.0}};
  const auto svg = ex::svg_line_plot(p);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("title &amp; co"), std::string::npos);
  EXPECT_NE(svg.find(">S_r</text>"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
  const auto d = svg.find("<path d=\"");
  ASSERT_NE(d, std::string::npos);
  const auto path = svg.substr(d, svg.find('"', d + 9) - d);
  EXPECT_EQ(std::count(path.begin(), path.end(), 'M'), 2);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(RunExperiment, LinearRCPresetWritesArtifacts) {
  auto c = ex::preset("rc-linear");
  c.output_dir = scratch("rc_linear").string();
  std::ostringstream out, err;
  ASSERT_EQ(ex::run_experiment(c, out, err), ex::kExitOk) << err.str();
  EXPECT_NE(out.str().find("NoneFound"), std::string::npos);

  const fs::path dir = c.output_dir;
  for (const char* f : {"landscape.csv", "threshold.json", "landscape.svg"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto rows = lines(slurp(dir / "landscape.csv"));
  ASSERT_EQ(rows.size(), c.amplitudes.count + 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].find("nan"), std::string::npos);
    EXPECT_EQ(rows[i].find("inf"), std::string::npos);
    double a = 0, s = 0;
    ASSERT_EQ(std::sscanf(rows[i].c_str(), "%lf,%lf", &a, &s), 2);
    EXPECT_LE(std::abs(s - 0.5 * a * a), 0.01 * 0.5 * a * a + 1e-15);
  }
  const auto j = nlohmann::json::parse(slurp(dir / "threshold.json"));
  EXPECT_EQ(j["threshold"]["kind"], "NoneFound");
  EXPECT_EQ(j["tool"]["version"], ex::kToolVersion);
  EXPECT_EQ(j["config_hash"], ex::hex64(ex::config_hash(c)));
  EXPECT_EQ(j["grids"]["amplitudes"].size(), c.amplitudes.count);
  EXPECT_EQ(ex::parse_config(j["config"]), c);
}

TEST(RunExperiment, RerunsAreByteIdentical) {
  auto c = ex::preset("rc-bistable");
  c.output_dir = scratch("rerun_a").string();
  std::ostringstream out, err;
  ASSERT_EQ(ex::run_experiment(c, out, err), ex::kExitOk);
  const auto first = slurp(fs::path(c.output_dir) / "landscape.csv");
  ASSERT_EQ(ex::run_experiment(c, out, err), ex::kExitOk);
  EXPECT_EQ(slurp(fs::path(c.output_dir) / "landscape.csv"), first);
  c.workers = 3;
  c.output_dir = scratch("rerun_b").string();
  ASSERT_EQ(ex::run_experiment(c, out, err), ex::kExitOk);
  EXPECT_EQ(slurp(fs::path(c.output_dir) / "landscape.csv"), first);
  EXPECT_NE(first.find(ex::kUnboundedSentinel), std::string::npos);
}

TEST(RunExperiment, DumpsTrajectories) {
  auto c = ex::preset("rc-bistable");
  c.amplitudes = {ex::Spacing::Linear, 1.5, 2.5, 6};
  c.output_dir = scratch("dump").string();
  c.dump_trajectories = true;
  std::ostringstream out, err;
  ASSERT_EQ(ex::run_experiment(c, out, err), ex::kExitOk) << err.str();
  const fs::path t = fs::path(c.output_dir) / "trajectories";
  EXPECT_TRUE(fs::exists(t / "node_000.csv"));
  EXPECT_TRUE(fs::exists(t / "node_005.csv"));
  EXPECT_EQ(lines(slurp(t / "node_000.csv"))[0], "t,v,i,cumulative_supply");
}

TEST(RunExperiment, ExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(ex::run_experiment("/nonexistent/config.json", out, err), ex::kExitValidation);
  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << "{ not json";
  EXPECT_EQ(ex::run_experiment(bad.string(), out, err), ex::kExitValidation);

  auto c = ex::preset("rc-linear");
  c.rates.lo = -1.0;
  EXPECT_EQ(ex::run_experiment(c, out, err), ex::kExitValidation);

  c = ex::preset("rc-linear");
  c.amplitudes = {ex::Spacing::Linear, 0.0, 1e200, 3};
  c.output_dir = scratch("overflow").string();
  EXPECT_EQ(ex::run_experiment(c, out, err), ex::kExitNumerical);
  EXPECT_NE(err.str().find("numerical failure"), std::string::npos);
}
