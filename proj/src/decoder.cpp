#include "spanlin/decoder.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "internal_util.hpp"
#include "spanlin/treebank.hpp"

namespace spanlin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_probabilities(const ProbMatrix& p, const char* who) {
  if (p.size() < 1) {
    throw std::invalid_argument(std::string(who) + ": empty matrix");
  }
  for (int j = 1; j <= p.size(); ++j) {
    for (int i = 0; i < j; ++i) {
      double v = p.at(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument(
            std::string(who) +
            ": probabilities must be finite and nonnegative");
      }
    }
  }
}

}  // namespace

TriangularMatrix::TriangularMatrix(int n, double init)
    : n_(n), cells_(cell_count(n), init) {
  if (n < 0) throw std::invalid_argument("matrix size must be nonnegative");
}

std::size_t TriangularMatrix::offset(int i, int j) const {
  if (i < 0 || j <= i || j > n_) {
    throw std::out_of_range("span (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") out of range for n = " +
                            std::to_string(n_));
  }
  return static_cast<std::size_t>(j) * (j - 1) / 2 + i;
}

ScoreMatrix biaffine_score(const SplitVectors& vectors) {
  const auto& l = vectors.left;
  const auto& r = vectors.right;
  if (l.size() < 2 || l.size() != r.size()) {
    throw std::invalid_argument(
        "biaffine_score: need matching left/right vectors for split points "
        "0..n");
  }
  int n = static_cast<int>(l.size()) - 1;
  std::size_t p = vectors.bias_left.size();
  std::size_t q = vectors.bias_right.size();
  if (p == 0 || q == 0) {
    throw std::invalid_argument("biaffine_score: zero-dimensional bias");
  }
  if (vectors.weight.size() != p) {
    throw std::invalid_argument("biaffine_score: weight row count " +
                                std::to_string(vectors.weight.size()) +
                                " does not match left dimension " +
                                std::to_string(p));
  }
  for (const auto& row : vectors.weight) {
    if (row.size() != q) {
      throw std::invalid_argument(
          "biaffine_score: weight column count does not match right "
          "dimension " +
          std::to_string(q));
    }
  }
  for (const auto& v : l) {
    if (v.size() != p) {
      throw std::invalid_argument(
          "biaffine_score: left vector dimension mismatch");
    }
  }
  for (const auto& v : r) {
    if (v.size() != q) {
      throw std::invalid_argument(
          "biaffine_score: right vector dimension mismatch");
    }
  }

  // alpha_ij = l_i^T W r_j + b1 . l_i + b2 . r_j
  std::vector<std::vector<double>> lw(l.size(), std::vector<double>(q, 0.0));
  std::vector<double> lb(l.size(), 0.0);
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (std::size_t x = 0; x < p; ++x) {
      lb[i] += vectors.bias_left[x] * l[i][x];
      for (std::size_t y = 0; y < q; ++y) {
        lw[i][y] += l[i][x] * vectors.weight[x][y];
      }
    }
  }
  ScoreMatrix scores(n);
  for (int j = 1; j <= n; ++j) {
    double rb = 0.0;
    for (std::size_t y = 0; y < q; ++y) rb += vectors.bias_right[y] * r[j][y];
    for (int i = 0; i < j; ++i) {
      double bilinear = 0.0;
      for (std::size_t y = 0; y < q; ++y) bilinear += lw[i][y] * r[j][y];
      scores.at(i, j) = bilinear + lb[i] + rb;
    }
  }
  return scores;
}

ProbMatrix normalize(const ScoreMatrix& scores) {
  int n = scores.size();
  if (n < 1) throw std::invalid_argument("normalize: empty matrix");
  ProbMatrix p(n);
  for (int j = 1; j <= n; ++j) {
    double max_score = scores.at(0, j);
    for (int i = 1; i < j; ++i) {
      max_score = std::max(max_score, scores.at(i, j));
    }
    if (!std::isfinite(max_score)) {
      throw std::invalid_argument("normalize: non-finite score in column " +
                                  std::to_string(j));
    }
    double sum = 0.0;
    for (int i = 0; i < j; ++i) {
      double e = std::exp(scores.at(i, j) - max_score);
      p.at(i, j) = e;
      sum += e;
    }
    for (int i = 0; i < j; ++i) p.at(i, j) /= sum;
  }
  return p;
}

Linearization predict_linearization(const ProbMatrix& p) {
  check_probabilities(p, "predict_linearization");
  int n = p.size();
  Linearization d(n, 0);
  for (int j = 1; j <= n; ++j) {
    int best = 0;
    double best_prob = p.at(0, j);
    for (int i = 1; i < j; ++i) {
      if (p.at(i, j) > best_prob) {
        best = i;
        best_prob = p.at(i, j);
      }
    }
    d[j - 1] = best;
  }
  return d;
}

Node cky_decode(const ProbMatrix& p) {
  check_probabilities(p, "cky_decode");
  int n = p.size();
  if (n == 1) return Node{};

  auto offset = [](int i, int j) {
    return static_cast<std::size_t>(j) * (j - 1) / 2 + i;
  };
  std::vector<double> lp(TriangularMatrix::cell_count(n));
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i < j; ++i) lp[offset(i, j)] = std::log(p.at(i, j));
  }

  // glog(i, j): best log product of left-child probabilities over subtrees
  // spanning (i, j), excluding the factor the parent contributes for (i, j)
  // itself. The root factor P(0 | n) is shared by every tree.
  std::vector<double> glog(TriangularMatrix::cell_count(n), 0.0);
  std::vector<int> back(TriangularMatrix::cell_count(n), -1);
  for (int width = 2; width <= n; ++width) {
    for (int i = 0; i + width <= n; ++i) {
      int j = i + width;
      double best = kNegInf;
      int best_k = j - 1;
      for (int k = i + 1; k < j; ++k) {
        double g_left = width == 2 ? 0.0 : glog[offset(i, k)];
        double g_right = glog[offset(k, j)];
        double cand = lp[offset(i, k)] + g_left + g_right;
        if (cand >= best) {
          best = cand;
          best_k = k;
        }
      }
      glog[offset(i, j)] = best;
      back[offset(i, j)] = best_k;
    }
  }
  return build_binary_skeleton(
      n, [&](int i, int j) { return back[offset(i, j)]; });
}

double tree_log_prob(const Node& binary_tree, const ProbMatrix& p) {
  Linearization d = linearize(binary_tree);
  if (static_cast<int>(d.size()) != p.size()) {
    throw std::invalid_argument("tree_log_prob: tree spans " +
                                std::to_string(d.size()) +
                                " words but the matrix has n = " +
                                std::to_string(p.size()));
  }
  double sum = 0.0;
  for (int j = 1; j <= p.size(); ++j) sum += std::log(p.at(d[j - 1], j));
  return sum;
}

void LabelTable::set(Span s, const std::string& label, double prob) {
  if (s.begin < 0 || s.end <= s.begin || s.end > n_) {
    throw std::out_of_range("label span " + span_to_string(s) +
                            " out of range for n = " + std::to_string(n_));
  }
  if (!std::isfinite(prob) || prob < 0.0) {
    throw std::invalid_argument("label probability must be finite and "
                                "nonnegative");
  }
  auto& dist = dist_[s];
  for (auto& entry : dist) {
    if (entry.first == label) {
      entry.second = prob;
      return;
    }
  }
  dist.emplace_back(label, prob);
}

const std::vector<std::pair<std::string, double>>& LabelTable::distribution(
    Span s) const {
  auto it = dist_.find(s);
  if (it == dist_.end()) {
    throw MissingSpanError("label table has no distribution for span " +
                           span_to_string(s));
  }
  return it->second;
}

std::string LabelTable::argmax(Span s) const {
  const auto& dist = distribution(s);
  const std::pair<std::string, double>* best = &dist.front();
  for (const auto& entry : dist) {
    if (entry.second > best->second ||
        (entry.second == best->second && entry.first < best->first)) {
      best = &entry;
    }
  }
  return best->first;
}

double LabelTable::prob(Span s, const std::string& label) const {
  auto it = dist_.find(s);
  if (it == dist_.end()) return 0.0;
  for (const auto& entry : it->second) {
    if (entry.first == label) return entry.second;
  }
  return 0.0;
}

ProbMatrix one_hot_probabilities(const Linearization& d) {
  int n = static_cast<int>(d.size());
  if (n == 0) {
    throw std::invalid_argument("one_hot_probabilities: empty input");
  }
  ProbMatrix p(n);
  for (int j = 1; j <= n; ++j) {
    if (d[j - 1] < 0 || d[j - 1] >= j) {
      throw std::invalid_argument("one_hot_probabilities: d_" +
                                  std::to_string(j) + " outside [0, " +
                                  std::to_string(j) + ")");
    }
    p.at(d[j - 1], j) = 1.0;
  }
  return p;
}

LabelTable one_hot_labels(const Node& binary_tree) {
  LabelTable table(leaf_count(binary_tree));
  for (const auto& [span, label] : span_labels(binary_tree)) {
    table.set(span, label, 1.0);
  }
  return table;
}

namespace {

std::string argmax_excluding_empty(const LabelTable& table, Span s) {
  const std::pair<std::string, double>* best = nullptr;
  for (const auto& entry : table.distribution(s)) {
    if (entry.first == empty_label()) continue;
    if (!best || entry.second > best->second ||
        (entry.second == best->second && entry.first < best->first)) {
      best = &entry;
    }
  }
  if (!best) {
    throw std::runtime_error(
        "assign_labels: only the empty label is available for the root "
        "span " +
        span_to_string(s));
  }
  return best->first;
}

}  // namespace

Node assign_labels(const Node& skeleton, const LabelTable& labels) {
  if (!is_binary_shape(skeleton)) {
    throw std::invalid_argument("assign_labels: tree is not binarized");
  }
  std::vector<SpanEntry> entries = preorder_spans(skeleton);
  int n = entries.front().end;
  if (labels.size() != n) {
    throw std::invalid_argument("assign_labels: label table covers n = " +
                                std::to_string(labels.size()) +
                                " but the tree spans " + std::to_string(n) +
                                " words");
  }
  std::vector<std::vector<int>> kids(entries.size());
  for (std::size_t idx = 1; idx < entries.size(); ++idx) {
    kids[entries[idx].parent].push_back(static_cast<int>(idx));
  }
  std::vector<Node> built(entries.size());
  for (int idx = static_cast<int>(entries.size()) - 1; idx >= 0; --idx) {
    const SpanEntry& e = entries[idx];
    Span span{e.begin, e.end};
    if (e.node->is_leaf()) {
      Node leaf{e.node->label, e.node->word, {}};
      bool parent_same_span =
          e.parent >= 0 && entries[e.parent].begin == e.begin &&
          entries[e.parent].end == e.end;
      if (parent_same_span) {
        // The wrapper above carries the span label.
        built[idx] = std::move(leaf);
        continue;
      }
      std::string label = labels.argmax(span);
      if (label == empty_label()) {
        built[idx] = std::move(leaf);
      } else {
        Node wrap{label, "", {}};
        wrap.children.push_back(std::move(leaf));
        built[idx] = std::move(wrap);
      }
      continue;
    }
    std::vector<Node> children;
    children.reserve(kids[idx].size());
    for (int c : kids[idx]) children.push_back(std::move(built[c]));
    if (children.size() == 1) {
      // Preterminal wrapper: an empty argmax dissolves it.
      std::string label = labels.argmax(span);
      if (label == empty_label()) {
        built[idx] = std::move(children.front());
      } else {
        built[idx] = Node{label, "", std::move(children)};
      }
      continue;
    }
    std::string label = idx == 0 ? argmax_excluding_empty(labels, span)
                                 : labels.argmax(span);
    built[idx] = Node{label, "", std::move(children)};
  }
  return std::move(built.front());
}

double nll_loss(const Node& gold_binary_tree, const ProbMatrix& p,
                const LabelTable& labels, bool include_empty_label_spans) {
  check_probabilities(p, "nll_loss");
  Linearization d = linearize(gold_binary_tree);
  int n = static_cast<int>(d.size());
  if (p.size() != n) {
    throw std::invalid_argument("nll_loss: matrix has n = " +
                                std::to_string(p.size()) +
                                " but the tree spans " + std::to_string(n) +
                                " words");
  }
  if (labels.size() != n) {
    throw std::invalid_argument("nll_loss: label table covers n = " +
                                std::to_string(labels.size()) +
                                " but the tree spans " + std::to_string(n) +
                                " words");
  }
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) sum += std::log(p.at(d[j - 1], j));
  for (const auto& [span, label] : span_labels(gold_binary_tree)) {
    if (!include_empty_label_spans && label == empty_label()) continue;
    sum += std::log(labels.prob(span, label));
  }
  return -sum / n;
}

std::vector<ScoreMatrix> parse_scores(std::istream& in) {
  std::vector<ScoreMatrix> matrices;
  std::string line;
  int line_number = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_number;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (!detail::is_blank(out)) return true;
    }
    return false;
  };
  while (next_line(line)) {
    if (line.rfind("n=", 0) != 0) {
      throw ParseError("expected 'n=<int>' block header", line_number, 1);
    }
    auto n_value = detail::parse_int(line.substr(2));
    if (!n_value || *n_value < 1) {
      throw ParseError("invalid sentence length '" + line.substr(2) + "'",
                       line_number, 1);
    }
    int n = static_cast<int>(*n_value);
    ScoreMatrix m(n);
    std::size_t expected = TriangularMatrix::cell_count(n);
    std::vector<bool> seen(expected, false);
    auto first_missing = [&]() {
      for (int j = 1; j <= n; ++j) {
        for (int i = 0; i < j; ++i) {
          if (!seen[static_cast<std::size_t>(j) * (j - 1) / 2 + i]) {
            return Span{i, j};
          }
        }
      }
      return Span{-1, -1};
    };
    std::size_t filled = 0;
    while (filled < expected) {
      if (!next_line(line) || line.rfind("n=", 0) == 0) {
        throw ParseError("missing cell " + span_to_string(first_missing()),
                         line_number, 1);
      }
      std::vector<std::string> parts = detail::split_ws(line);
      if (parts.size() != 3) {
        throw ParseError("malformed cell line (expected 'j i value')",
                         line_number, 1);
      }
      auto j_value = detail::parse_int(parts[0]);
      auto i_value = detail::parse_int(parts[1]);
      auto score = detail::parse_double(parts[2]);
      if (!j_value || !i_value || !score) {
        throw ParseError("malformed cell line (expected 'j i value')",
                         line_number, 1);
      }
      if (!std::isfinite(*score)) {
        throw ParseError("non-finite score", line_number, 1);
      }
      int j = static_cast<int>(*j_value);
      int i = static_cast<int>(*i_value);
      if (i < 0 || j <= i || j > n) {
        throw ParseError("cell index out of range: (" + std::to_string(i) +
                             ", " + std::to_string(j) + ")",
                         line_number, 1);
      }
      std::size_t idx = static_cast<std::size_t>(j) * (j - 1) / 2 + i;
      if (seen[idx]) {
        throw ParseError("duplicate cell (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")",
                         line_number, 1);
      }
      seen[idx] = true;
      m.at(i, j) = *score;
      ++filled;
    }
    matrices.push_back(std::move(m));
  }
  return matrices;
}

std::vector<ScoreMatrix> load_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_scores(in);
}

void save_scores(std::ostream& out, const ScoreMatrix& scores) {
  out << "n=" << scores.size() << '\n';
  for (int j = 1; j <= scores.size(); ++j) {
    for (int i = 0; i < j; ++i) {
      out << j << ' ' << i << ' ' << detail::format_double(scores.at(i, j))
          << '\n';
    }
  }
}

void save_scores(const std::string& path,
                 const std::vector<ScoreMatrix>& scores) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const ScoreMatrix& m : scores) save_scores(out, m);
}

std::vector<LabelTable> parse_labels(std::istream& in) {
  std::vector<LabelTable> tables;
  std::set<std::pair<Span, std::string>> seen;
  int header_line = 0;
  std::string line;
  int line_number = 0;

  auto finalize = [&](const LabelTable& table) {
    for (const auto& [span, dist] : table.spans()) {
      double sum = 0.0;
      for (const auto& entry : dist) sum += entry.second;
      if (std::abs(sum - 1.0) > 1e-9) {
        throw ParseError("distribution for span " + span_to_string(span) +
                             " sums to " + detail::format_double(sum),
                         header_line, 1);
      }
    }
  };

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::is_blank(line)) continue;
    if (line.rfind("n=", 0) == 0) {
      if (!tables.empty()) finalize(tables.back());
      auto n_value = detail::parse_int(line.substr(2));
      if (!n_value || *n_value < 1) {
        throw ParseError("invalid sentence length '" + line.substr(2) + "'",
                         line_number, 1);
      }
      tables.emplace_back(static_cast<int>(*n_value));
      seen.clear();
      header_line = line_number;
      continue;
    }
    if (tables.empty()) {
      throw ParseError("expected 'n=<int>' block header", line_number, 1);
    }
    std::vector<std::string> parts = detail::split_ws(line);
    if (parts.size() != 4) {
      throw ParseError("malformed label line (expected 'i j label prob')",
                       line_number, 1);
    }
    auto i_value = detail::parse_int(parts[0]);
    auto j_value = detail::parse_int(parts[1]);
    auto prob = detail::parse_double(parts[3]);
    if (!i_value || !j_value || !prob) {
      throw ParseError("malformed label line (expected 'i j label prob')",
                       line_number, 1);
    }
    if (!std::isfinite(*prob) || *prob < 0.0) {
      throw ParseError("label probability must be finite and nonnegative",
                       line_number, 1);
    }
    int i = static_cast<int>(*i_value);
    int j = static_cast<int>(*j_value);
    int n = tables.back().size();
    if (i < 0 || j <= i || j > n) {
      throw ParseError("label span out of range: (" + std::to_string(i) +
                           ", " + std::to_string(j) + ")",
                       line_number, 1);
    }
    std::string label = deserialize_label(parts[2]);
    if (!seen.emplace(Span{i, j}, label).second) {
      throw ParseError("duplicate label entry for span (" +
                           std::to_string(i) + ", " + std::to_string(j) +
                           ") and label '" + parts[2] + "'",
                       line_number, 1);
    }
    tables.back().set(Span{i, j}, label, *prob);
  }
  if (!tables.empty()) finalize(tables.back());
  return tables;
}

std::vector<LabelTable> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_labels(in);
}

void save_labels(std::ostream& out, const LabelTable& labels) {
  out << "n=" << labels.size() << '\n';
  for (const auto& [span, dist] : labels.spans()) {
    for (const auto& [label, prob] : dist) {
      out << span.begin << ' ' << span.end << ' ' << serialize_label(label)
          << ' ' << detail::format_double(prob) << '\n';
    }
  }
}

void save_labels(const std::string& path,
                 const std::vector<LabelTable>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const LabelTable& table : labels) save_labels(out, table);
}

}  // namespace spanlin
