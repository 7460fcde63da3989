#include "spanlin/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace spanlin {

std::vector<LabeledSpan> extract_eval_spans(
    const Node& tree, const std::set<std::string>& ignore_labels) {
  std::vector<LabeledSpan> spans;
  for (const SpanEntry& e : preorder_spans(tree)) {
    if (e.node->is_leaf()) continue;
    if (ignore_labels.count(e.node->label) != 0) continue;
    spans.push_back({e.begin, e.end, e.node->label});
  }
  return spans;
}

Scores f1(const TriCount& counts) {
  Scores s;
  if (counts.gold > 0) {
    s.recall = static_cast<double>(counts.matched) / counts.gold;
  }
  if (counts.predicted > 0) {
    s.precision = static_cast<double>(counts.matched) / counts.predicted;
  }
  if (s.recall + s.precision > 0.0) {
    s.f1 = 2.0 * s.recall * s.precision / (s.recall + s.precision);
  }
  return s;
}

EvalCounts& EvalCounts::operator+=(const EvalCounts& other) {
  if (bucket_width != other.bucket_width) {
    throw std::invalid_argument("cannot merge counts with bucket widths " +
                                std::to_string(bucket_width) + " and " +
                                std::to_string(other.bucket_width));
  }
  auto add = [](TriCount& into, const TriCount& from) {
    into.matched += from.matched;
    into.gold += from.gold;
    into.predicted += from.predicted;
  };
  add(total, other.total);
  for (const auto& [key, counts] : other.by_length) add(by_length[key], counts);
  for (const auto& [key, counts] : other.by_label) add(by_label[key], counts);
  return *this;
}

namespace {

int bucket_start(int length, int width) {
  return ((length - 1) / width) * width + 1;
}

}  // namespace

EvalCounts score(const Node& gold, const Node& predicted,
                 const std::set<std::string>& ignore_labels,
                 int bucket_width) {
  if (bucket_width < 1) {
    throw std::invalid_argument("bucket width must be positive");
  }
  int gold_n = leaf_count(gold);
  int predicted_n = leaf_count(predicted);
  if (gold_n != predicted_n) {
    throw std::invalid_argument("sentence length mismatch: gold has " +
                                std::to_string(gold_n) +
                                " words, prediction has " +
                                std::to_string(predicted_n));
  }
  std::vector<LabeledSpan> gold_spans = extract_eval_spans(gold, ignore_labels);
  std::vector<LabeledSpan> predicted_spans =
      extract_eval_spans(predicted, ignore_labels);

  EvalCounts counts;
  counts.bucket_width = bucket_width;
  counts.total.gold = static_cast<long long>(gold_spans.size());
  counts.total.predicted = static_cast<long long>(predicted_spans.size());

  std::map<LabeledSpan, long long> remaining;
  for (const LabeledSpan& s : gold_spans) {
    ++remaining[s];
    ++counts.by_length[bucket_start(s.end - s.begin, bucket_width)].gold;
    ++counts.by_label[s.label].gold;
  }
  for (const LabeledSpan& s : predicted_spans) {
    int bucket = bucket_start(s.end - s.begin, bucket_width);
    ++counts.by_length[bucket].predicted;
    ++counts.by_label[s.label].predicted;
    auto it = remaining.find(s);
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      ++counts.total.matched;
      ++counts.by_length[bucket].matched;
      ++counts.by_label[s.label].matched;
    }
  }
  return counts;
}

namespace {

std::string percent(double fraction) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << fraction * 100.0;
  return out.str();
}

void format_row(std::ostream& out, const std::string& key,
                const TriCount& counts) {
  Scores s = f1(counts);
  out << "  " << std::left << std::setw(12) << key << std::right
      << std::setw(9) << counts.matched << std::setw(9) << counts.gold
      << std::setw(9) << counts.predicted << std::setw(9)
      << percent(s.recall) << std::setw(9) << percent(s.precision)
      << std::setw(9) << percent(s.f1) << '\n';
}

void format_header(std::ostream& out, const std::string& key_name) {
  out << "  " << std::left << std::setw(12) << key_name << std::right
      << std::setw(9) << "matched" << std::setw(9) << "gold" << std::setw(9)
      << "pred" << std::setw(9) << "LR" << std::setw(9) << "LP"
      << std::setw(9) << "F1" << '\n';
}

}  // namespace

std::string format_report(const EvalCounts& counts) {
  std::ostringstream out;
  Scores overall = f1(counts.total);
  out << "matched: " << counts.total.matched << "  gold: "
      << counts.total.gold << "  predicted: " << counts.total.predicted
      << '\n';
  out << "LR: " << percent(overall.recall) << "  LP: "
      << percent(overall.precision) << "  F1: " << percent(overall.f1)
      << '\n';

  out << "\nby span length\n";
  format_header(out, "length");
  for (const auto& [bucket, tri] : counts.by_length) {
    std::string key = std::to_string(bucket) + "-" +
                      std::to_string(bucket + counts.bucket_width - 1);
    format_row(out, key, tri);
  }

  out << "\nby label\n";
  format_header(out, "label");
  std::vector<std::pair<std::string, TriCount>> labels(
      counts.by_label.begin(), counts.by_label.end());
  std::stable_sort(labels.begin(), labels.end(),
                   [](const auto& a, const auto& b) {
                     return a.second.gold > b.second.gold;
                   });
  for (const auto& [label, tri] : labels) format_row(out, label, tri);

  out << '\n';
  out << "TOTAL " << counts.total.matched << ' ' << counts.total.gold << ' '
      << counts.total.predicted << '\n';
  for (const auto& [bucket, tri] : counts.by_length) {
    out << "LEN " << bucket << ' ' << tri.matched << ' ' << tri.gold << ' '
        << tri.predicted << '\n';
  }
  for (const auto& [label, tri] : labels) {
    out << "LABEL " << label << ' ' << tri.matched << ' ' << tri.gold << ' '
        << tri.predicted << '\n';
  }
  return out.str();
}

}  // namespace spanlin
