#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "gat/data_io.hpp"
#include "gat/errors.hpp"
#include "gat/prob.hpp"
#include "gat/prompts.hpp"

namespace gat {

// Which answer option becomes the claim to verify. MostConf turns the
// model's prediction into a statement (so the verification label matches
// whether the prediction was right); LeastConf and RunnerUp probe weaker
// options.
enum class OracleStrategy { MostConf, LeastConf, RunnerUp };

inline const char* to_string(OracleStrategy s) {
  switch (s) {
    case OracleStrategy::MostConf: return "mostconf";
    case OracleStrategy::LeastConf: return "leastconf";
    case OracleStrategy::RunnerUp: return "runnerup";
  }
  return "unknown";
}

inline OracleStrategy parse_strategy(std::string_view token) {
  if (token == "mostconf") return OracleStrategy::MostConf;
  if (token == "leastconf") return OracleStrategy::LeastConf;
  if (token == "runnerup") return OracleStrategy::RunnerUp;
  fail(Errc::BadConfig, "unknown oracle strategy '" + std::string(token) + "'");
}

// Index selected by the strategy. Ties resolve to the lowest index at every
// rank, so the choice is deterministic for any input.
inline std::size_t select_option(OracleStrategy strategy,
                                 const ProbVector& dist) {
  if (dist.size() < 2) fail(Errc::TooFewOptions, "need at least 2 options");
  switch (strategy) {
    case OracleStrategy::MostConf:
      return argmax_index(dist);
    case OracleStrategy::LeastConf: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < dist.size(); ++i)
        if (dist[i] < dist[best]) best = i;
      return best;
    }
    case OracleStrategy::RunnerUp: {
      const std::size_t top = argmax_index(dist);
      std::size_t second = top == 0 ? 1 : 0;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        if (i == top) continue;
        if (dist[i] > dist[second] ||
            (dist[i] == dist[second] && i < second))
          second = i;
      }
      return second;
    }
  }
  fail(Errc::BadConfig, "unhandled strategy");
}

// Binary verification label: the claim is true exactly when the chosen
// option is the gold answer.
inline bool derive_nlv_label(std::size_t chosen_index,
                             std::size_t gold_index) {
  return chosen_index == gold_index;
}

// Optional question+option -> declarative statement rewriter, typically
// backed by a remote model. Implementations throw
// Error(Errc::ReformatterFailure) once their own retries are exhausted.
using Reformatter =
    std::function<std::string(const std::string& question,
                              const std::string& option)>;

// Renders the claim for one option, preferring the reformatter when one is
// given and falling back to the deterministic template if it fails.
inline std::string render_statement(const std::string& question,
                                    const std::string& option,
                                    const Reformatter& reformatter = {}) {
  if (reformatter) {
    try {
      return reformatter(question, option);
    } catch (const Error& e) {
      if (e.code() != Errc::ReformatterFailure) throw;
      // bounded retries already happened inside the reformatter
    }
  }
  return fallback_statement(question, option);
}

struct AdaptedStatement {
  std::string source_id;
  OracleStrategy strategy = OracleStrategy::RunnerUp;
  std::size_t chosen_index = 0;
  std::string statement;
  bool nlv_gold = false;
};

// Sample scorer: returns the verification distribution over {true, false}
// for a rendered prompt. Throws (CacheMiss / RemoteFailure / ...) when the
// distribution cannot be obtained.
using NlvScorer = std::function<ProbVector(const SampleRecord& source,
                                           const std::string& prompt)>;

struct AdaptResult {
  std::vector<SampleRecord> records;           // task "nlv", K = 2
  std::vector<AdaptedStatement> statements;    // aligned with records
  std::vector<std::pair<std::string, std::string>> excluded;  // id, reason
};

// Converts a multiple-choice pool into binary verification records. The
// label space of every output is exactly {true, false} no matter how many
// options the source had. Samples whose verification distribution cannot be
// obtained are dropped and reported, not fatal. Scoring may run on several
// threads; outputs are assembled in input order either way.
inline AdaptResult adapt_pool(std::span<const SampleRecord> pool,
                              OracleStrategy strategy, const NlvScorer& scorer,
                              const Reformatter& reformatter = {},
                              std::size_t jobs = 1) {
  if (pool.empty()) fail(Errc::EmptyPool, "nothing to adapt");
  if (!scorer) fail(Errc::BadConfig, "no scorer provided");

  struct Slot {
    bool ok = false;
    SampleRecord record;
    AdaptedStatement statement;
    std::string error;
  };
  std::vector<Slot> slots(pool.size());

  auto work = [&](std::size_t i) {
    const SampleRecord& src = pool[i];
    Slot& slot = slots[i];
    try {
      ProbVector dist = normalize(src.main_probs);
      AdaptedStatement st;
      st.source_id = src.id;
      st.strategy = strategy;
      st.chosen_index = select_option(strategy, dist);
      st.statement = render_statement(src.question,
                                      src.options[st.chosen_index],
                                      reformatter);
      st.nlv_gold = derive_nlv_label(st.chosen_index, src.gold_index);

      const std::string prompt = build_nlv_prompt(src.context, st.statement);
      ProbVector nlv = scorer(src, prompt);
      if (nlv.size() != 2)
        fail(Errc::ValidationError, "scorer returned K != 2");

      SampleRecord out;
      out.id = src.id;
      out.task = "nlv";
      out.context = src.context;
      out.question = st.statement;
      out.options = {"true", "false"};
      out.gold_index = st.nlv_gold ? 0 : 1;
      out.main_probs = nlv.values();
      out.embedding = src.embedding;
      out.metadata = src.metadata;
      out.metadata["strategy"] = to_string(strategy);
      out.metadata["source_option"] = src.options[st.chosen_index];
      slot.record = std::move(out);
      slot.statement = std::move(st);
      slot.ok = true;
    } catch (const Error& e) {
      slot.error = e.what();
    }
  };

  if (jobs <= 1 || pool.size() <= 1) {
    for (std::size_t i = 0; i < pool.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < pool.size();
           i = next.fetch_add(1))
        work(i);
    };
    std::vector<std::thread> threads;
    const std::size_t n_threads = std::min(jobs, pool.size());
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  AdaptResult result;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (slots[i].ok) {
      result.records.push_back(std::move(slots[i].record));
      result.statements.push_back(std::move(slots[i].statement));
    } else {
      result.excluded.emplace_back(pool[i].id, slots[i].error);
    }
  }
  return result;
}

}  // namespace gat
