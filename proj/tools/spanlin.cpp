// Command-line front end: linearize trees, rebuild trees from span
// sequences, decode probability matrices, score predictions, and exercise
// the exhaustive checkers.
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "internal_util.hpp"
#include "spanlin/bench.hpp"
#include "spanlin/decoder.hpp"
#include "spanlin/eval.hpp"
#include "spanlin/linearization.hpp"
#include "spanlin/oracle.hpp"
#include "spanlin/random_trees.hpp"
#include "spanlin/treebank.hpp"

using namespace spanlin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitIllegal = 2;

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SplitRule rule_from_string(const std::string& mode) {
  if (mode == "exact") return SplitRule::exact;
  if (mode == "leq") return SplitRule::leq;
  if (mode == "argmin") return SplitRule::argmin;
  throw std::invalid_argument("unknown reconstruction mode: " + mode);
}

std::string format_linearization(const Linearization& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(d[i]);
  }
  return out;
}

std::vector<Linearization> read_linearizations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Linearization> result;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::is_blank(line)) continue;
    Linearization d;
    for (const std::string& part : detail::split_ws(line)) {
      auto value = detail::parse_int(part);
      if (!value) {
        throw ParseError("invalid span entry '" + part + "'", line_number, 1);
      }
      d.push_back(static_cast<int>(*value));
    }
    result.push_back(std::move(d));
  }
  return result;
}

// Writes to the path, or to stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) {
        throw std::runtime_error("cannot open " + path + " for writing");
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::set<std::string> parse_label_set(const std::string& csv) {
  std::set<std::string> labels;
  std::string current;
  std::istringstream in(csv);
  while (std::getline(in, current, ',')) {
    if (!current.empty()) labels.insert(deserialize_label(current));
  }
  return labels;
}

std::vector<int> parse_sizes(const std::string& csv) {
  std::vector<int> sizes;
  std::string current;
  std::istringstream in(csv);
  while (std::getline(in, current, ',')) {
    auto value = detail::parse_int(current);
    if (!value || *value < 2) {
      throw std::invalid_argument("invalid bench size '" + current + "'");
    }
    sizes.push_back(static_cast<int>(*value));
  }
  if (sizes.empty()) throw std::invalid_argument("no bench sizes given");
  return sizes;
}

int cmd_linearize(const std::string& input, const std::string& output) {
  Output out(output);
  for (const Tree& tree : read_bracketed_file(input)) {
    Tree binary = binarize(preprocess(tree));
    out.stream() << format_linearization(linearize(binary)) << '\n';
  }
  return kExitOk;
}

int cmd_reconstruct(const std::string& input, const std::string& mode,
                    const std::string& output) {
  SplitRule rule = rule_from_string(mode);
  Output out(output);
  std::vector<Linearization> inputs = read_linearizations(input);
  for (std::size_t idx = 0; idx < inputs.size(); ++idx) {
    const Linearization& d = inputs[idx];
    if (rule == SplitRule::exact) {
      LegalityReport report = check_legality(d);
      if (!report.legal) {
        throw LegalityError("sequence " + std::to_string(idx + 1) + " (" +
                            format_linearization(d) +
                            ") is illegal: " + describe(report));
      }
    }
    Node tree = reconstruct(d, rule);
    out.stream() << print_bracketed(with_placeholders(tree)) << '\n';
  }
  return kExitOk;
}

int cmd_decode(const std::string& scores_path, const std::string& labels_path,
               const std::string& mode, const std::string& output) {
  std::vector<ScoreMatrix> scores = load_scores(scores_path);
  std::vector<LabelTable> labels;
  if (!labels_path.empty()) {
    labels = load_labels(labels_path);
    if (labels.size() != scores.size()) {
      throw std::invalid_argument(
          "score file has " + std::to_string(scores.size()) +
          " sentences but label file has " + std::to_string(labels.size()));
    }
  }
  Output out(output);
  for (std::size_t idx = 0; idx < scores.size(); ++idx) {
    ProbMatrix p = normalize(scores[idx]);
    Node skeleton = mode == "cky"
                        ? cky_decode(p)
                        : reconstruct(predict_linearization(p),
                                      rule_from_string(mode));
    Tree printable =
        labels.empty()
            ? with_placeholders(skeleton)
            : with_placeholders(debinarize(assign_labels(skeleton,
                                                         labels[idx])));
    out.stream() << print_bracketed(printable) << '\n';
  }
  return kExitOk;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& ignore_csv, int bucket_width,
             const std::string& output) {
  std::vector<Tree> gold = read_bracketed_file(gold_path);
  std::vector<Tree> pred = read_bracketed_file(pred_path);
  if (gold.size() != pred.size()) {
    throw std::invalid_argument(
        "gold file has " + std::to_string(gold.size()) +
        " trees but prediction file has " + std::to_string(pred.size()));
  }
  if (gold.empty()) throw std::invalid_argument("no trees to evaluate");
  std::set<std::string> ignore = parse_label_set(ignore_csv);
  EvalCounts merged;
  merged.bucket_width = bucket_width;
  for (std::size_t idx = 0; idx < gold.size(); ++idx) {
    try {
      merged += score(preprocess(gold[idx]), preprocess(pred[idx]), ignore,
                      bucket_width);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("sentence " + std::to_string(idx + 1) +
                                  ": " + e.what());
    }
  }
  Output out(output);
  out.stream() << format_report(merged);
  return kExitOk;
}

// One reconstruction battery over a binarized tree.
void check_tree_invariants(const Node& binary, const std::string& what) {
  Linearization d = linearize(binary);
  int n = static_cast<int>(d.size());
  LegalityReport report = check_legality(d);
  if (!report.legal) {
    throw CheckFailure(what + ": linearization " + format_linearization(d) +
                       " reported illegal: " + describe(report));
  }
  std::set<Span> expected = left_child_spans(binary);
  std::set<Span> from_d;
  for (int j = 1; j <= n; ++j) from_d.insert({d[j - 1], j});
  if (from_d != expected || from_d.size() != static_cast<std::size_t>(n)) {
    throw CheckFailure(what + ": left-child spans do not match {(d_j, j)}");
  }
  for (SplitRule rule :
       {SplitRule::exact, SplitRule::leq, SplitRule::argmin}) {
    Node rebuilt = reconstruct(d, rule);
    if (binary_internal_spans(rebuilt) != binary_internal_spans(binary) ||
        linearize(rebuilt) != d) {
      throw CheckFailure(what + ": reconstruction changed the tree for " +
                         format_linearization(d));
    }
  }
}

int cmd_check(const std::string& input, int random_trials, int max_n,
              std::uint64_t seed, const std::string& output) {
  Output out(output);
  int trees_checked = 0;
  if (!input.empty()) {
    std::vector<Tree> trees = read_bracketed_file(input);
    for (std::size_t idx = 0; idx < trees.size(); ++idx) {
      check_tree_invariants(binarize(preprocess(trees[idx])),
                            "tree " + std::to_string(idx + 1));
      ++trees_checked;
    }
  }
  std::mt19937_64 rng(seed);
  int sequences_checked = 0;
  for (int trial = 0; trial < random_trials; ++trial) {
    int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
    check_tree_invariants(random_skeleton(n, rng),
                          "random tree " + std::to_string(trial + 1));
    ++trees_checked;

    // Arbitrary bounded sequences: the relaxed rules must stay total and
    // all rules must agree whenever the input is legal.
    Linearization d = random_condition1(n, rng);
    Node via_leq = reconstruct_leq(d);
    Node via_argmin = reconstruct_argmin(d);
    if (leaf_count(via_leq) != n || leaf_count(via_argmin) != n) {
      throw CheckFailure("sequence " + format_linearization(d) +
                         ": wrong leaf count after reconstruction");
    }
    if (is_legal(d)) {
      Node via_exact = reconstruct_exact(d);
      if (binary_internal_spans(via_exact) !=
              binary_internal_spans(via_leq) ||
          binary_internal_spans(via_exact) !=
              binary_internal_spans(via_argmin)) {
        throw CheckFailure("sequence " + format_linearization(d) +
                           ": rules disagree on a legal input");
      }
      if (linearize(via_exact) != d) {
        throw CheckFailure("sequence " + format_linearization(d) +
                           ": exact reconstruction is not an inverse");
      }
    }
    ++sequences_checked;
  }
  out.stream() << "checked " << trees_checked << " trees and "
               << sequences_checked << " sequences: all invariants hold\n";
  return kExitOk;
}

int cmd_bench(const std::string& sizes_csv, int trials,
              const std::string& shape, const std::string& mode,
              std::uint64_t seed) {
  BenchResult result =
      run_reconstruction_bench(parse_sizes(sizes_csv), trials,
                               bench_shape_from_string(shape),
                               rule_from_string(mode), seed);
  std::cout << format_bench_table(result, false);
  std::cerr << format_bench_table(result, true);
  return kExitOk;
}

int cmd_oracle_test(int max_n, int trials, std::uint64_t seed,
                    const std::string& output) {
  Output out(output);
  for (int n = 1; n <= max_n; ++n) {
    std::uint64_t legal = 0;
    std::uint64_t total = 0;
    oracle::for_each_bounded_sequence(n, [&](const Linearization& d) {
      ++total;
      bool fast = is_legal(d);
      if (fast != oracle::legality_by_enumeration(d)) {
        throw CheckFailure("legality disagreement at " +
                           format_linearization(d));
      }
      if (fast) ++legal;
    });
    if (legal != oracle::catalan(n - 1)) {
      throw CheckFailure("expected " + std::to_string(oracle::catalan(n - 1)) +
                         " legal sequences for n = " + std::to_string(n) +
                         ", found " + std::to_string(legal));
    }
    out.stream() << "n=" << n << ": " << legal << " of " << total
                 << " sequences legal, matching enumeration\n";
  }

  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);
    ProbMatrix p = normalize(random_scores(n, rng));
    auto [best, best_prob] = oracle::best_tree_bruteforce(p);
    Node decoded = cky_decode(p);
    if (!same_shape(best, decoded) ||
        std::abs(std::log(best_prob) - tree_log_prob(decoded, p)) > 1e-9) {
      throw CheckFailure("decoder mismatch on a random matrix with n = " +
                         std::to_string(n));
    }
  }
  out.stream() << "chart decoder matches brute force on " << trials
               << " random matrices\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"span linearization toolkit"};
  app.require_subcommand(1);

  std::string input;
  std::string output = "-";
  std::string mode = "exact";
  std::string scores_path;
  std::string labels_path;
  std::string gold_path;
  std::string pred_path;
  std::string ignore_csv;
  std::string sizes_csv = "100,200,400,800,1600,3200";
  std::string shape = "random";
  int bucket_width = 5;
  int trials = 5;
  int random_trials = 0;
  int max_n = 40;
  int oracle_max_n = 7;
  int oracle_trials = 200;
  std::uint64_t seed = 1;

  CLI::App* linearize_cmd = app.add_subcommand(
      "linearize", "print the span sequence of each tree in a file");
  linearize_cmd->add_option("--input", input, "bracketed trees, one per line")
      ->required();
  linearize_cmd->add_option("--output", output, "output path, - for stdout");

  CLI::App* reconstruct_cmd = app.add_subcommand(
      "reconstruct", "rebuild trees from span sequences");
  reconstruct_cmd
      ->add_option("--input", input, "span sequences, one per line")
      ->required();
  reconstruct_cmd->add_option("--mode", mode, "exact, leq, or argmin");
  reconstruct_cmd->add_option("--output", output,
                              "output path, - for stdout");

  CLI::App* decode_cmd = app.add_subcommand(
      "decode", "decode probability matrices into trees");
  decode_cmd->add_option("--scores", scores_path, "span score file")
      ->required();
  decode_cmd->add_option("--labels", labels_path,
                         "span label file; omit for bare skeletons");
  decode_cmd->add_option("--mode", mode, "exact, leq, argmin, or cky");
  decode_cmd->add_option("--output", output, "output path, - for stdout");

  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "score predicted trees against gold trees");
  eval_cmd->add_option("--gold", gold_path, "gold trees")->required();
  eval_cmd->add_option("--pred", pred_path, "predicted trees")->required();
  eval_cmd->add_option("--ignore-labels", ignore_csv,
                       "comma-separated labels to skip");
  eval_cmd->add_option("--bucket-width", bucket_width,
                       "span length bucket width");
  eval_cmd->add_option("--output", output, "output path, - for stdout");

  CLI::App* check_cmd = app.add_subcommand(
      "check", "verify round-trip invariants on trees and sequences");
  check_cmd->add_option("--input", input, "bracketed trees to check");
  check_cmd->add_option("--random", random_trials,
                        "number of random trials to add");
  check_cmd->add_option("--max-n", max_n, "largest random sentence length");
  check_cmd->add_option("--seed", seed, "random seed");
  check_cmd->add_option("--output", output, "output path, - for stdout");

  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "measure reconstruction work; the deterministic table goes "
               "to stdout, timings to stderr");
  bench_cmd->add_option("--sizes", sizes_csv, "comma-separated lengths");
  bench_cmd->add_option("--trials", trials, "trials per length");
  bench_cmd->add_option("--shape", shape,
                        "random, left-chain, or right-chain");
  bench_cmd->add_option("--mode", mode, "exact, leq, or argmin");
  bench_cmd->add_option("--seed", seed, "random seed");

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-test", "compare fast paths against exhaustive enumeration");
  oracle_cmd->add_option("--max-n", oracle_max_n,
                         "exhaustive legality check up to this length");
  oracle_cmd->add_option("--trials", oracle_trials,
                         "random decoder comparisons");
  oracle_cmd->add_option("--seed", seed, "random seed");
  oracle_cmd->add_option("--output", output, "output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (app.got_subcommand(linearize_cmd)) return cmd_linearize(input, output);
    if (app.got_subcommand(reconstruct_cmd)) {
      return cmd_reconstruct(input, mode, output);
    }
    if (app.got_subcommand(decode_cmd)) {
      return cmd_decode(scores_path, labels_path, mode, output);
    }
    if (app.got_subcommand(eval_cmd)) {
      return cmd_eval(gold_path, pred_path, ignore_csv, bucket_width, output);
    }
    if (app.got_subcommand(check_cmd)) {
      if (input.empty() && random_trials == 0) {
        throw std::invalid_argument("check needs --input and/or --random");
      }
      if (max_n < 1 || max_n > 100000) {
        throw std::invalid_argument("check: --max-n out of range");
      }
      return cmd_check(input, random_trials, max_n, seed, output);
    }
    if (app.got_subcommand(bench_cmd)) {
      return cmd_bench(sizes_csv, trials, shape, mode, seed);
    }
    if (app.got_subcommand(oracle_cmd)) {
      return cmd_oracle_test(oracle_max_n, oracle_trials, seed, output);
    }
  } catch (const LegalityError& e) {
    std::cerr << "illegal input: " << e.what() << '\n';
    return kExitIllegal;
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kExitIllegal;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}
