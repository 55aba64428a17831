#include "neurobands/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include "neurobands/errors.hpp"

namespace neurobands {

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw SplitError("train_fraction must lie in (0, 1)");
}

namespace {

// Shuffles `items` and moves the first round(fraction * n) into train.
template <typename T>
void partition_stratum(std::vector<T> items, double fraction, std::mt19937_64& rng, std::vector<T>& train,
                       std::vector<T>& test, const char* what) {
  if (items.size() < 2) {
    throw SplitError(std::string("need at least 2 ") + what + " per class, found " + std::to_string(items.size()));
  }
  std::shuffle(items.begin(), items.end(), rng);
  auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(items.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, items.size() - 1);
  train.insert(train.end(), items.begin(), items.begin() + static_cast<std::ptrdiff_t>(n_train));
  test.insert(test.end(), items.begin() + static_cast<std::ptrdiff_t>(n_train), items.end());
}

using TrialKey = std::pair<std::int32_t, std::int32_t>;

}  // namespace

SplitResult split(const FeatureSet& features, const SplitSpec& spec) {
  spec.validate();
  features.validate();
  const auto highs = std::count(features.labels.begin(), features.labels.end(), ClassLabel::high);
  if (highs == 0 || static_cast<std::size_t>(highs) == features.n_rows) {
    throw SplitError("both classes must be present");
  }

  std::mt19937_64 rng(spec.seed);
  SplitResult out;

  if (spec.granularity == SplitGranularity::window) {
    std::vector<std::size_t> strata[2];
    for (std::size_t r = 0; r < features.n_rows; ++r) strata[static_cast<int>(features.labels[r])].push_back(r);
    if (spec.stratified) {
      for (auto& s : strata) partition_stratum(std::move(s), spec.train_fraction, rng, out.train_rows, out.test_rows, "rows");
    } else {
      std::vector<std::size_t> all(features.n_rows);
      std::iota(all.begin(), all.end(), std::size_t{0});
      partition_stratum(std::move(all), spec.train_fraction, rng, out.train_rows, out.test_rows, "rows");
    }
  } else {
    // Group rows by source trial; a trial's windows share its label.
    std::map<TrialKey, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < features.n_rows; ++r) {
      groups[{features.provenance[r].subject, features.provenance[r].trial}].push_back(r);
    }
    std::vector<TrialKey> strata[2];
    for (const auto& [key, rows] : groups) strata[static_cast<int>(features.labels[rows.front()])].push_back(key);
    std::vector<TrialKey> train_keys, test_keys;
    if (spec.stratified) {
      for (auto& s : strata) partition_stratum(std::move(s), spec.train_fraction, rng, train_keys, test_keys, "trials");
    } else {
      std::vector<TrialKey> all;
      for (const auto& [key, rows] : groups) all.push_back(key);
      partition_stratum(std::move(all), spec.train_fraction, rng, train_keys, test_keys, "trials");
    }
    for (const auto& k : train_keys) out.train_rows.insert(out.train_rows.end(), groups[k].begin(), groups[k].end());
    for (const auto& k : test_keys) out.test_rows.insert(out.test_rows.end(), groups[k].begin(), groups[k].end());
  }

  std::sort(out.train_rows.begin(), out.train_rows.end());
  std::sort(out.test_rows.begin(), out.test_rows.end());
  out.train = features.select_rows(out.train_rows);
  out.test = features.select_rows(out.test_rows);
  return out;
}

double Confusion::accuracy() const {
  return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
}

void Confusion::add(ClassLabel actual, ClassLabel predicted) {
  if (actual == ClassLabel::high) {
    (predicted == ClassLabel::high ? tp : fn) += 1;
  } else {
    (predicted == ClassLabel::high ? fp : tn) += 1;
  }
}

Confusion& Confusion::operator+=(const Confusion& o) {
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  tp += o.tp;
  return *this;
}

namespace {

Network make_network(const ElectrodeSet& set, const HarnessConfig& cfg) {
  NetworkConfig nc = cfg.network;
  nc.input_dim = set.size() * kBands.size();
  return build_network(nc);
}

// Majority vote over each trial's test windows; ties go to class 0.
double trial_vote_accuracy(const FeatureSet& test, std::span<const ClassLabel> predicted) {
  std::map<TrialKey, std::pair<std::size_t, std::size_t>> votes;  // (high votes, total)
  std::map<TrialKey, ClassLabel> truth;
  for (std::size_t r = 0; r < test.n_rows; ++r) {
    const TrialKey key{test.provenance[r].subject, test.provenance[r].trial};
    auto& v = votes[key];
    v.first += predicted[r] == ClassLabel::high ? 1 : 0;
    v.second += 1;
    truth[key] = test.labels[r];
  }
  std::size_t correct = 0;
  for (const auto& [key, v] : votes) {
    const ClassLabel vote = 2 * v.first > v.second ? ClassLabel::high : ClassLabel::low;
    correct += vote == truth[key] ? 1 : 0;
  }
  return votes.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(votes.size());
}

EvalReport base_report(const ElectrodeSet& set) {
  EvalReport rep;
  rep.set_id = set.id;
  rep.electrodes = set.electrodes;
  rep.n_electrodes = set.size();
  rep.prior_accuracy = set.prior_accuracy;
  return rep;
}

}  // namespace

RunResult run_features(const FeatureSet& features, const ElectrodeSet& set, const HarnessConfig& cfg) {
  if (features.n_cols() != set.size() * kBands.size()) throw ShapeError("feature width does not match the set");
  SplitResult parts = split(features, cfg.split);
  Network net = make_network(set, cfg);
  TrainConfig tc = cfg.train;
  tc.standardize = true;
  EvalReport rep = base_report(set);
  rep.train_history = train(net, parts.train, tc);

  const auto predicted = predict(net, parts.test);
  for (std::size_t r = 0; r < parts.test.n_rows; ++r) rep.confusion.add(parts.test.labels[r], predicted[r]);
  rep.test_accuracy = rep.confusion.accuracy();
  rep.trial_accuracy = trial_vote_accuracy(parts.test, predicted);
  rep.n_train = parts.train.n_rows;
  rep.n_test = parts.test.n_rows;
  return RunResult{std::move(rep), std::move(net), std::move(parts)};
}

EvalReport run_set(std::span<const Recording> recs, const ElectrodeSet& set, const HarnessConfig& cfg) {
  if (recs.empty()) throw DataError("no recordings given");
  if (!cfg.per_subject) {
    const FeatureSet fs = extract_features(recs, set, cfg.window, cfg.label);
    return run_features(fs, set, cfg).report;
  }

  // Per-subject: train and test within each recording, then sum confusions.
  EvalReport rep = base_report(set);
  double trial_acc_sum = 0.0;
  for (const auto& rec : recs) {
    const FeatureSet fs = extract_features(rec, set, cfg.window, cfg.label);
    const EvalReport sub = run_features(fs, set, cfg).report;
    rep.confusion += sub.confusion;
    rep.n_train += sub.n_train;
    rep.n_test += sub.n_test;
    trial_acc_sum += sub.trial_accuracy.value_or(0.0);
    auto& h = rep.train_history.epochs;
    if (h.empty()) h.assign(sub.train_history.epochs.size(), EpochStats{});
    for (std::size_t e = 0; e < h.size(); ++e) {
      h[e].loss += sub.train_history.epochs[e].loss / static_cast<double>(recs.size());
      h[e].accuracy += sub.train_history.epochs[e].accuracy / static_cast<double>(recs.size());
    }
  }
  rep.test_accuracy = rep.confusion.accuracy();
  rep.trial_accuracy = trial_acc_sum / static_cast<double>(recs.size());
  return rep;
}

ComparisonTable compare_sets(std::span<const Recording> recs, std::span<const ElectrodeSet> sets,
                             const HarnessConfig& cfg) {
  if (sets.empty()) throw SetIdError("no electrode sets to compare");
  // Resolve everything up front so a bad set fails before any training.
  for (const auto& s : sets) {
    for (const auto& rec : recs) resolve_indices(s, rec.channel_names);
  }

  ComparisonTable table;
  table.rows.resize(sets.size());
  std::vector<std::exception_ptr> errors(sets.size());
  const std::size_t workers = std::clamp<std::size_t>(cfg.jobs, 1, sets.size());
  auto work = [&](std::size_t k) {
    for (std::size_t i = k; i < sets.size(); i += workers) {
      try {
        table.rows[i] = run_set(recs, sets[i], cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work, k);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return table;
}

CurveData curve_from_reports(const ComparisonTable& evaluated) {
  CurveData curve;
  curve.evaluated = evaluated;
  std::map<std::size_t, const EvalReport*> best;
  for (const auto& r : evaluated.rows) {
    auto it = best.find(r.n_electrodes);
    if (it == best.end() || r.test_accuracy > it->second->test_accuracy) best[r.n_electrodes] = &r;
  }
  for (const auto& [n, r] : best) curve.points.push_back({n, r->test_accuracy, r->set_id});
  return curve;
}

CurveData electrode_count_sweep(std::span<const Recording> recs, const HarnessConfig& cfg) {
  std::vector<ElectrodeSet> sets;
  for (int n : kSweepSets) sets.push_back(literature_set(n));
  return curve_from_reports(compare_sets(recs, sets, cfg));
}

}  // namespace neurobands
