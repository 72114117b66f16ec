#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gat/errors.hpp"
#include "gat/prob.hpp"
#include "gat/rng.hpp"

namespace gat {

// One candidate test sample. Pools are exchanged as JSON Lines, one record
// per line, probabilities stored as probabilities (never logits).
struct SampleRecord {
  std::string id;
  std::string task;
  std::string context;
  std::string question;
  std::vector<std::string> options;
  std::size_t gold_index = 0;
  std::vector<double> main_probs;
  std::optional<std::vector<double>> surrogate_probs;
  std::optional<std::vector<double>> embedding;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

enum class SyntheticKind { Calibrated, MiscalibratedOverconfident, UniformNoise };

inline const char* to_string(SyntheticKind k) {
  switch (k) {
    case SyntheticKind::Calibrated: return "calibrated";
    case SyntheticKind::MiscalibratedOverconfident: return "overconfident";
    case SyntheticKind::UniformNoise: return "uniform";
  }
  return "unknown";
}

inline SyntheticKind parse_synthetic_kind(std::string_view token) {
  if (token == "calibrated") return SyntheticKind::Calibrated;
  if (token == "overconfident") return SyntheticKind::MiscalibratedOverconfident;
  if (token == "uniform") return SyntheticKind::UniformNoise;
  fail(Errc::BadScenario, "unknown scenario '" + std::string(token) + "'");
}

struct SyntheticScenario {
  SyntheticKind kind = SyntheticKind::Calibrated;
  std::size_t n = 100;
  std::size_t k = 2;
  double error_rate = 0.3;
  std::uint64_t seed = 42;
  // share of wrong predictions made with confidence >= 0.9 under
  // MiscalibratedOverconfident; ignored by the other scenarios
  double overconfident_fraction = 0.6;
  std::size_t embedding_dim = 8;
};

// True when the text holds more than one sentence boundary, counting every
// '.', '!' and '?'. Deliberately simple; it exists to filter pools whose
// question field mixes context sentences with the actual question.
inline bool has_multiple_sentences(std::string_view text) {
  std::size_t boundaries = 0;
  for (char c : text)
    if (c == '.' || c == '!' || c == '?') ++boundaries;
  return boundaries >= 2;
}

struct LoadOptions {
  // keep only records whose question spans multiple sentences
  bool multi_sentence_only = false;
};

namespace detail {

// validates a probability list in place; drift up to 1e-6 from unit mass is
// renormalized away, anything larger is the caller's error to report
inline void repair_probs(std::vector<double>& probs, std::size_t expect_len,
                         const std::string& field, std::size_t line) {
  const std::string at = "line " + std::to_string(line) + ": " + field;
  if (probs.size() != expect_len)
    fail(Errc::ValidationError,
         at + " length " + std::to_string(probs.size()) +
             " != option count " + std::to_string(expect_len));
  double sum = 0.0;
  for (double v : probs) {
    if (!std::isfinite(v) || v < 0.0)
      fail(Errc::ValidationError, at + " has a negative or non-finite entry");
    sum += v;
  }
  if (sum <= 0.0) fail(Errc::ValidationError, at + " sums to zero");
  if (std::fabs(sum - 1.0) > 1e-6)
    fail(Errc::ValidationError,
         at + " sums to " + std::to_string(sum) + ", beyond repairable drift");
  // Rescale only when the mass is actually off; leaving already-valid rows
  // untouched keeps load(write(pool)) an exact round trip.
  if (std::fabs(sum - 1.0) > kMassTolerance)
    for (double& v : probs) v /= sum;
}

inline SampleRecord record_from_json(const nlohmann::json& j,
                                     std::size_t line) {
  const std::string at = "line " + std::to_string(line) + ": ";
  if (!j.is_object()) fail(Errc::ValidationError, at + "record is not an object");
  SampleRecord rec;
  try {
    if (!j.contains("id") || !j["id"].is_string() ||
        j["id"].get<std::string>().empty())
      fail(Errc::ValidationError, at + "missing or empty id");
    rec.id = j["id"].get<std::string>();
    rec.task = j.value("task", std::string{});
    rec.context = j.value("context", std::string{});
    rec.question = j.value("question", std::string{});

    if (!j.contains("options") || !j["options"].is_array())
      fail(Errc::ValidationError, at + "missing options array");
    for (const auto& o : j["options"]) {
      if (!o.is_string())
        fail(Errc::ValidationError, at + "options must be strings");
      rec.options.push_back(o.get<std::string>());
    }
    if (rec.options.size() < 2)
      fail(Errc::ValidationError, at + "needs at least 2 options");

    if (!j.contains("gold_index") || !j["gold_index"].is_number_integer())
      fail(Errc::ValidationError, at + "missing integer gold_index");
    const auto gold = j["gold_index"].get<long long>();
    if (gold < 0 || static_cast<std::size_t>(gold) >= rec.options.size())
      fail(Errc::ValidationError, at + "gold_index out of range");
    rec.gold_index = static_cast<std::size_t>(gold);

    if (!j.contains("main_probs") || !j["main_probs"].is_array())
      fail(Errc::ValidationError, at + "missing main_probs array");
    rec.main_probs = j["main_probs"].get<std::vector<double>>();
    repair_probs(rec.main_probs, rec.options.size(), "main_probs", line);

    if (j.contains("surrogate_probs") && !j["surrogate_probs"].is_null()) {
      rec.surrogate_probs = j["surrogate_probs"].get<std::vector<double>>();
      repair_probs(*rec.surrogate_probs, rec.options.size(), "surrogate_probs",
                   line);
    }
    if (j.contains("embedding") && !j["embedding"].is_null()) {
      rec.embedding = j["embedding"].get<std::vector<double>>();
      if (rec.embedding->empty())
        fail(Errc::ValidationError, at + "embedding is empty");
      for (double v : *rec.embedding)
        if (!std::isfinite(v))
          fail(Errc::ValidationError, at + "embedding has non-finite entry");
    }
    if (j.contains("metadata") && !j["metadata"].is_null()) {
      for (const auto& [k, v] : j["metadata"].items()) {
        if (!v.is_string())
          fail(Errc::ValidationError, at + "metadata values must be strings");
        rec.metadata[k] = v.get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ValidationError, at + e.what());
  }
  return rec;
}

inline nlohmann::json record_to_json(const SampleRecord& rec) {
  nlohmann::json j;
  j["id"] = rec.id;
  j["task"] = rec.task;
  j["context"] = rec.context;
  j["question"] = rec.question;
  j["options"] = rec.options;
  j["gold_index"] = rec.gold_index;
  j["main_probs"] = rec.main_probs;
  if (rec.surrogate_probs) j["surrogate_probs"] = *rec.surrogate_probs;
  if (rec.embedding) j["embedding"] = *rec.embedding;
  if (!rec.metadata.empty()) j["metadata"] = rec.metadata;
  return j;
}

}  // namespace detail

// Canonical one-line serialization (sorted keys, shortest float repr).
inline std::string to_jsonl(const SampleRecord& rec) {
  return detail::record_to_json(rec).dump();
}

inline std::vector<SampleRecord> load_pool(const std::filesystem::path& path,
                                           const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) fail(Errc::ValidationError, "cannot open " + path.string());
  std::vector<SampleRecord> pool;
  std::map<std::string, std::size_t> seen_ids;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      fail(Errc::ParseError,
           "line " + std::to_string(line_no) + ": " + e.what());
    }
    auto rec = detail::record_from_json(j, line_no);
    if (auto it = seen_ids.find(rec.id); it != seen_ids.end())
      fail(Errc::DuplicateId, "line " + std::to_string(line_no) + ": id '" +
                                  rec.id + "' already used on line " +
                                  std::to_string(it->second));
    seen_ids[rec.id] = line_no;
    if (opts.multi_sentence_only && !has_multiple_sentences(rec.question))
      continue;
    pool.push_back(std::move(rec));
  }
  if (pool.empty()) fail(Errc::EmptyPool, "no records in " + path.string());
  return pool;
}

// Collects every problem in the file instead of stopping at the first;
// returns an empty list when the pool is valid and nonempty.
inline std::vector<std::string> validate_pool(
    const std::filesystem::path& path) {
  std::vector<std::string> problems;
  std::ifstream in(path);
  if (!in) return {"cannot open " + path.string()};
  std::map<std::string, std::size_t> seen_ids;
  std::string text;
  std::size_t line_no = 0, records = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto rec = detail::record_from_json(nlohmann::json::parse(text), line_no);
      if (auto it = seen_ids.find(rec.id); it != seen_ids.end())
        problems.push_back("line " + std::to_string(line_no) + ": id '" +
                           rec.id + "' already used on line " +
                           std::to_string(it->second));
      else
        seen_ids[rec.id] = line_no;
      ++records;
    } catch (const nlohmann::json::parse_error& e) {
      problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  if (records == 0) problems.push_back("no records in " + path.string());
  return problems;
}

inline void write_pool(const std::filesystem::path& path,
                       std::span<const SampleRecord> pool) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::ValidationError, "cannot write " + path.string());
  for (const auto& rec : pool) out << to_jsonl(rec) << '\n';
}

// Deterministic synthetic pools for estimator and harness tests. Every
// record carries main and surrogate distributions plus an embedding, so any
// acquisition function can run on any scenario. The per-record draw order
// is fixed; identical scenarios serialize byte-identically.
//
//   Calibrated:      confidence tracks correctness (correct answers are
//                    confident, wrong ones hedge).
//   MiscalibratedOverconfident: `overconfident_fraction` of the wrong
//                    predictions are confidently wrong (max-prob >= 0.9),
//                    the silent-failure regime.
//   UniformNoise:    every distribution is exactly uniform.
inline std::vector<SampleRecord> generate_synthetic(
    const SyntheticScenario& sc) {
  if (sc.n < 2 || sc.k < 2)
    fail(Errc::BadScenario, "need n >= 2 and k >= 2");
  if (!(sc.error_rate >= 0.0 && sc.error_rate <= 1.0))
    fail(Errc::BadScenario, "error_rate must lie in [0, 1]");
  if (!(sc.overconfident_fraction >= 0.0 && sc.overconfident_fraction <= 1.0))
    fail(Errc::BadScenario, "overconfident_fraction must lie in [0, 1]");
  if (sc.embedding_dim == 0)
    fail(Errc::BadScenario, "embedding_dim must be >= 1");

  SplitMix64 rng(mix_seed(sc.seed, fnv1a(to_string(sc.kind))));
  std::vector<SampleRecord> pool;
  pool.reserve(sc.n);
  for (std::size_t i = 0; i < sc.n; ++i) {
    SampleRecord rec;
    {
      std::ostringstream id;
      id << "s" << std::setw(6) << std::setfill('0') << i;
      rec.id = id.str();
    }
    rec.task = "synthetic";
    rec.context = "";
    rec.question = "Which class fits sample " + std::to_string(i) + "?";
    for (std::size_t c = 0; c < sc.k; ++c)
      rec.options.push_back("class_" + std::to_string(c));
    rec.metadata["scenario"] = to_string(sc.kind);

    const bool is_error = rng.next_double() < sc.error_rate;
    std::size_t gold = 0, predicted = 0;
    rec.main_probs.assign(sc.k, 0.0);

    if (sc.kind == SyntheticKind::UniformNoise) {
      // exact uniform distribution; argmax ties resolve to index 0, so a
      // wrong prediction means the gold label sits elsewhere
      std::fill(rec.main_probs.begin(), rec.main_probs.end(),
                1.0 / static_cast<double>(sc.k));
      gold = is_error ? 1 + rng.next_below(sc.k - 1) : 0;
      predicted = 0;
    } else {
      gold = rng.next_below(sc.k);
      double confidence;
      if (!is_error) {
        predicted = gold;
        confidence = rng.next_double(0.75, 0.93);
      } else {
        predicted = rng.next_below(sc.k - 1);
        if (predicted >= gold) ++predicted;
        const bool silent =
            sc.kind == SyntheticKind::MiscalibratedOverconfident &&
            rng.next_double() < sc.overconfident_fraction;
        confidence = silent ? rng.next_double(0.93, 0.995)
                            : rng.next_double(0.52, 0.72);
      }
      const double rest =
          (1.0 - confidence) / static_cast<double>(sc.k - 1);
      for (std::size_t c = 0; c < sc.k; ++c)
        rec.main_probs[c] = c == predicted ? confidence : rest;
    }
    rec.gold_index = gold;

    // surrogate view: log-normal perturbation of the main distribution
    {
      std::vector<double> raw(sc.k);
      for (std::size_t c = 0; c < sc.k; ++c)
        raw[c] = rec.main_probs[c] * std::exp(0.6 * rng.next_normal());
      rec.surrogate_probs = normalize(raw).values();
    }

    // embedding: noisy one-hot-ish layout, offset when the answer is wrong
    {
      std::vector<double> emb(sc.embedding_dim);
      for (std::size_t d = 0; d < sc.embedding_dim; ++d) {
        emb[d] = rng.next_normal();
        if (d == gold % sc.embedding_dim) emb[d] += 2.5;
        if (is_error && d == (gold + 1) % sc.embedding_dim) emb[d] += 1.5;
      }
      rec.embedding = std::move(emb);
    }
    pool.push_back(std::move(rec));
  }
  return pool;
}

}  // namespace gat
