// pairbounds command-line front end. Every subcommand assembles an
// ExperimentConfig and hands it to run(); the summary goes to stdout.
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pairbounds/error.hpp"
#include "pairbounds/experiment.hpp"

namespace pb = pairbounds;

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pb::Error(pb::Errc::ConfigError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw pb::Error(pb::Errc::ConfigError, path + ": " + e.what());
  }
}

int execute(nlohmann::json body, const std::string& kind, const std::vector<std::string>& overrides) {
  body["kind"] = kind;
  const pb::RunOutcome outcome = pb::run(pb::parse_config(std::move(body), overrides));
  std::cout << outcome.summary.dump(2) << '\n';
  for (const auto& a : outcome.artifacts) std::cerr << "wrote " << a << '\n';
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalization bounds for learning from pairwise comparisons"};
  app.set_version_flag("--version", std::string(PAIRBOUNDS_VERSION));
  app.require_subcommand(1);

  std::vector<std::string> overrides;
  std::string out;
  std::string format = "csv";

  std::string edges_path;
  auto* analyze = app.add_subcommand("analyze-graph", "Dependency structure of an edge list");
  analyze->add_option("edges", edges_path, "Edge list (u v [y] per line)")->required();
  analyze->add_option("--out", out, "Directory for analysis.json");

  std::string spec_path;
  std::string edges_out;
  auto* sample = app.add_subcommand("sample-labeler", "Draw training pairs from a labeler spec");
  sample->add_option("--spec", spec_path, "Labeler spec JSON")->required();
  sample->add_option("--out", edges_out, "Edge list to write")->required();

  std::string inputs_path;
  auto* bounds = app.add_subcommand("compute-bounds", "Evaluate bounds from a JSON request file");
  bounds->add_option("--in", inputs_path, "Request object or array")->required();
  bounds->add_option("--out", out, "Directory for bounds.json");

  std::string config_path;
  auto* study = app.add_subcommand("defect-study", "Generalization defect against bound totals");
  study->add_option("--config", config_path, "Study config JSON")->required();
  study->add_option("--set", overrides, "key=value override (repeatable)");
  study->add_option("--out", out, "Output directory (overrides output_dir)");
  study->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::size_t n = 0, m = 0, trials = 0;
  double delta = 0.1;
  std::uint64_t seed = 0;
  auto* maxdeg = app.add_subcommand("verify-maxdeg", "Check the G(n, m) maximum-degree bound by simulation");
  maxdeg->add_option("--n", n)->required();
  maxdeg->add_option("--m", m)->required();
  maxdeg->add_option("--delta", delta)->required();
  maxdeg->add_option("--trials", trials)->required();
  maxdeg->add_option("--seed", seed);
  maxdeg->add_option("--out", out, "Directory for verify_maxdeg.json");

  auto* generic = app.add_subcommand("run", "Run any experiment from a config with a 'kind' field");
  generic->add_option("--config", config_path)->required();
  generic->add_option("--set", overrides, "key=value override (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    nlohmann::json body = nlohmann::json::object();
    if (!out.empty()) body["output_dir"] = out;

    if (*analyze) {
      body["edges"] = edges_path;
      return execute(std::move(body), "analyze-graph", {});
    }
    if (*sample) {
      body["spec"] = read_json_file(spec_path);
      body["out"] = edges_out;
      return execute(std::move(body), "sample-labeler", {});
    }
    if (*bounds) {
      body["requests"] = read_json_file(inputs_path);
      return execute(std::move(body), "compute-bounds", {});
    }
    if (*study) {
      nlohmann::json cfg = read_json_file(config_path);
      if (!cfg.is_object()) throw pb::Error(pb::Errc::ConfigError, "config must be a JSON object");
      if (!out.empty()) cfg["output_dir"] = out;
      if (study->count("--format")) cfg["format"] = format;
      return execute(std::move(cfg), "defect-study", overrides);
    }
    if (*maxdeg) {
      body.update({{"n", n}, {"m", m}, {"delta", delta}, {"trials", trials}, {"seed", seed}});
      return execute(std::move(body), "verify-maxdeg", {});
    }
    if (*generic) {
      const pb::RunOutcome outcome = pb::run(pb::load_config(config_path, overrides));
      std::cout << outcome.summary.dump(2) << '\n';
      for (const auto& a : outcome.artifacts) std::cerr << "wrote " << a << '\n';
      return outcome.exit_code;
    }
  } catch (const pb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == pb::Errc::InvariantViolation ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
