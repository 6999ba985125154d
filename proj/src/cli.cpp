#include "mealy/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "mealy/classify.hpp"
#include "mealy/element.hpp"
#include "mealy/errors.hpp"
#include "mealy/experiments.hpp"
#include "mealy/io.hpp"
#include "mealy/order.hpp"
#include "mealy/report.hpp"
#include "mealy/sample.hpp"

namespace mealy {
namespace {

constexpr const char* kPolNote =
    "Pol(d) sampling rejects uniform transition tables until the activity degree matches; "
    "it is only practical for small n and k.";

struct CliConfig {
  std::string input;
  std::string output;
  std::string table;
  std::string word;
  std::string format = "native";
  std::string config_path;
  std::string skeleton;
  bool strict = false;
  bool meta = false;
  bool inclusive = false;
  std::optional<std::uint64_t> seed;
  std::uint64_t trial = 0;
  std::uint64_t count = 1;
  std::uint64_t trials = 1000;
  std::size_t n = 3;
  std::size_t k = 2;
  int degree = 0;
  std::string sampler = "invertible-reversible";
  std::string experiment = "reset";
  std::string mode = "sampled";
  unsigned threads = 0;
  OrderBudget budget;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw Error(ErrorKind::input_domain, "cannot write '" + path + "'");
}

std::uint64_t resolve_seed(const CliConfig& c, std::ostream& err) {
  const std::uint64_t seed = c.seed ? *c.seed : (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();
  err << "seed: " << seed << "\nrng: " << Rng::algorithm << "\n";
  return seed;
}

int cmd_classify(const CliConfig& c, std::ostream& out) {
  const auto a = load_automaton(c.input);
  write_output(c.output, class_report_to_json(classify(a, {c.strict})).dump(2) + "\n", out);
  return 0;
}

int cmd_order(const CliConfig& c, std::ostream& out) {
  const auto a = load_automaton(c.input);
  nlohmann::ordered_json doc;
  if (c.word.empty()) {
    doc = nlohmann::ordered_json::array();
    for (const auto& cert : analyze(a, c.budget)) doc.push_back(certificate_to_json(a, cert));
  } else {
    const auto word = parse_signed_word(a, c.word);
    if (word.size() == 1 && word[0].sign > 0) {
      // A single generator gets the class certificates first, as in analyze.
      doc = certificate_to_json(a, analyze(a, c.budget)[word[0].state]);
    } else {
      const auto group = AutomatonGroup::create(a);
      doc = certificate_to_json(a, order_of(Element(group, word), c.budget));
    }
  }
  write_output(c.output, doc.dump(2) + "\n", out);
  return 0;
}

int cmd_sample(const CliConfig& c, std::ostream& out, std::ostream& err) {
  SamplerSpec spec;
  spec.sampler = sampler_class_from_string(c.sampler);
  spec.n = c.n;
  spec.k = c.k;
  spec.degree = c.degree;
  spec.degree_inclusive = c.inclusive;
  spec.seed = resolve_seed(c, err);
  std::optional<MealyAutomaton> skeleton;
  if (!c.skeleton.empty()) skeleton = load_automaton(c.skeleton);
  if (c.count > 1 && (c.output.empty() || c.output == "-")) {
    throw Error(ErrorKind::input_domain, "--count above 1 needs --output as a file prefix");
  }
  for (std::uint64_t i = 0; i < c.count; ++i) {
    spec.trial_index = c.trial + i;
    const auto a = sample(spec, skeleton ? &*skeleton : nullptr);
    auto doc = automaton_to_json(a);
    if (c.meta) doc["meta"] = {{"sampler", sampler_spec_to_json(spec)}, {"rng", Rng::algorithm}};
    const std::string path = c.count > 1 ? c.output + "_" + std::to_string(spec.trial_index) + ".json" : c.output;
    write_output(path, doc.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_experiment(const CliConfig& c, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw Error(ErrorKind::parse, "cannot open '" + c.config_path + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::parse, std::string("malformed config at byte ") + std::to_string(e.byte));
    }
    config = experiment_config_from_json(doc);
    if (c.seed) config.spec.seed = *c.seed;
    err << "seed: " << config.spec.seed << "\nrng: " << Rng::algorithm << "\n";
  } else {
    config.experiment = c.experiment;
    config.mode = experiment_mode_from_string(c.mode);
    config.trials = c.trials;
    config.spec.n = c.n;
    config.spec.k = c.k;
    config.spec.seed = resolve_seed(c, err);
  }
  ExperimentOptions options;
  options.threads = c.threads;
  const auto report = run_experiment(config, options);
  write_output(c.output, report_to_json(report).dump(2) + "\n", out);
  if (!c.table.empty()) write_output(c.table, trial_table_csv(report), out);
  return 0;
}

int cmd_convert(const CliConfig& c, std::ostream& out) {
  const auto a = load_automaton(c.input);
  write_output(c.output, c.format == "dot" ? to_dot(a) : format_automaton(a), out);
  return 0;
}

void add_budgets(CLI::App* cmd, CliConfig& c) {
  cmd->add_option("--signalizer-vertices", c.budget.signalizer_vertices, "Orbit signalizer vertex budget")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--power-cap", c.budget.brute_force_powers, "Largest power tried by brute force")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--word-length-cap", c.budget.word_length, "Longest word used for orbit computations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--identity-budget", c.budget.identity_sections, "Sections explored per identity test")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mealy automata: classes, element orders, sampling and experiments", "mealy"};
  app.require_subcommand(1);
  CliConfig c;

  auto* classify_cmd = app.add_subcommand("classify", "Print the class report of an automaton");
  classify_cmd->add_option("input", c.input, "Automaton file")->required();
  classify_cmd->add_flag("--strict", c.strict, "Reject states other than id_state that act trivially");
  classify_cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");

  auto* order_cmd = app.add_subcommand("order", "Certify the order of a generator or state word");
  order_cmd->add_option("input", c.input, "Automaton file")->required();
  order_cmd->add_option("word", c.word, "Generator or signed state word such as \"a b^-1\"; all states if omitted");
  order_cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");
  add_budgets(order_cmd, c);

  auto* sample_cmd = app.add_subcommand("sample", "Draw a random automaton from a class");
  sample_cmd->footer(kPolNote);
  sample_cmd->add_option("--class", c.sampler,
                         "invertible-reversible, reset-unfolded, reset-minimal, pol or pol0-conditional")
      ->capture_default_str();
  sample_cmd->add_option("-n,--states", c.n, "Number of states")->check(CLI::PositiveNumber)->capture_default_str();
  sample_cmd->add_option("-k,--letters", c.k, "Number of letters")->check(CLI::PositiveNumber)->capture_default_str();
  sample_cmd->add_option("--degree", c.degree, "Activity degree for pol (-1: finitary)")->capture_default_str();
  sample_cmd->add_flag("--inclusive", c.inclusive, "pol: accept every degree up to --degree");
  sample_cmd->add_option("--skeleton", c.skeleton, "Transition skeleton file for pol0-conditional");
  sample_cmd->add_option("--seed", c.seed, "64-bit seed (default: random, echoed on stderr)");
  sample_cmd->add_option("--trial", c.trial, "Trial index of the first sample")->capture_default_str();
  sample_cmd->add_option("--count", c.count, "Number of samples")->check(CLI::PositiveNumber);
  sample_cmd->add_flag("--meta", c.meta, "Embed the sampler spec in the output document");
  sample_cmd->add_option("-o,--output", c.output, "Output file, or file prefix with --count");

  auto* exp_cmd = app.add_subcommand("experiment", "Run a sampling or enumeration experiment");
  exp_cmd->footer(kPolNote);
  exp_cmd->add_option("--config", c.config_path, "Experiment configuration file");
  exp_cmd->add_option("--name", c.experiment, "bireversible, reset, bounded or finitary-fraction")
      ->capture_default_str();
  exp_cmd->add_option("--mode", c.mode, "exact or sampled")->capture_default_str();
  exp_cmd->add_option("-n,--states", c.n, "Number of states")->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("-k,--letters", c.k, "Number of letters")->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("--trials", c.trials, "Sampled trials")->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("--seed", c.seed, "64-bit seed (default: random, echoed on stderr)");
  exp_cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
  exp_cmd->add_option("-o,--output", c.output, "Report file (default: stdout)");
  exp_cmd->add_option("--table", c.table, "Per-trial CSV table");

  auto* convert_cmd = app.add_subcommand("convert", "Normalize an automaton file or export it as DOT");
  convert_cmd->add_option("input", c.input, "Automaton file")->required();
  convert_cmd->add_option("--format", c.format, "native or dot")
      ->check(CLI::IsMember({"native", "dot"}))
      ->capture_default_str();
  convert_cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error (parse): " << e.what() << "\n";
    return exit_code(ErrorKind::parse);
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(c, out);
    if (order_cmd->parsed()) return cmd_order(c, out);
    if (sample_cmd->parsed()) return cmd_sample(c, out, err);
    if (exp_cmd->parsed()) return cmd_experiment(c, out, err);
    if (convert_cmd->parsed()) return cmd_convert(c, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error (internal): " << e.what() << "\n";
    return exit_code(ErrorKind::internal);
  }
  return exit_code(ErrorKind::internal);
}

}  // namespace mealy
