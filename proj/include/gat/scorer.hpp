#pragma once

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "gat/adaptation.hpp"
#include "gat/detail/sha256.hpp"
#include "gat/errors.hpp"
#include "gat/prob.hpp"
#include "gat/prompts.hpp"

namespace gat {

inline constexpr std::string_view kReformatTemplateId = "reformat@v1";

// Content hash for cache addressing. Fields are length-prefixed so that
// ("ab","c") and ("a","bc") can never collide.
inline std::string cache_key(std::string_view template_id,
                             std::string_view prompt,
                             std::string_view model_id) {
  detail::Sha256 h;
  auto feed = [&h](std::string_view field) {
    const std::string len = std::to_string(field.size()) + ":";
    h.update(len);
    h.update(field);
  };
  feed(template_id);
  feed(prompt);
  feed(model_id);
  const auto digest = h.digest();
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (unsigned char byte : digest) {
    out.push_back(hex[byte >> 4]);
    out.push_back(hex[byte & 0xf]);
  }
  return out;
}

// Content-addressed response cache: one JSON file per key under a
// configurable directory. Readers take no lock (files appear atomically via
// tmp+rename); writers are serialized per the single-writer contract.
class ScorerCache {
 public:
  explicit ScorerCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<ProbVector> lookup_probs(const std::string& key) const {
    auto entry = read_entry(key);
    if (!entry || !entry->contains("probs")) return std::nullopt;
    return normalize((*entry)["probs"].get<std::vector<double>>());
  }

  std::optional<std::string> lookup_text(const std::string& key) const {
    auto entry = read_entry(key);
    if (!entry || !entry->contains("text")) return std::nullopt;
    return (*entry)["text"].get<std::string>();
  }

  void store_probs(const std::string& key, const std::vector<double>& probs,
                   std::string_view template_id, std::string_view model_id,
                   std::string_view prompt) {
    nlohmann::json entry = base_entry(template_id, model_id, prompt);
    entry["probs"] = probs;
    write_entry(key, entry);
  }

  void store_text(const std::string& key, const std::string& text,
                  std::string_view template_id, std::string_view model_id,
                  std::string_view prompt) {
    nlohmann::json entry = base_entry(template_id, model_id, prompt);
    entry["text"] = text;
    write_entry(key, entry);
  }

 private:
  static nlohmann::json base_entry(std::string_view template_id,
                                   std::string_view model_id,
                                   std::string_view prompt) {
    nlohmann::json entry;
    entry["template_id"] = std::string(template_id);
    entry["model_id"] = std::string(model_id);
    entry["prompt"] = std::string(prompt);
    return entry;
  }

  std::optional<nlohmann::json> read_entry(const std::string& key) const {
    std::ifstream in(dir_ / (key + ".json"), std::ios::binary);
    if (!in.good()) return std::nullopt;
    try {
      return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;  // treat a torn or foreign file as a miss
    }
  }

  void write_entry(const std::string& key, const nlohmann::json& entry) {
    std::lock_guard<std::mutex> lock(write_mutex_);
    const auto final_path = dir_ / (key + ".json");
    const auto tmp_path = dir_ / (key + ".json.tmp");
    {
      std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
      if (!out.good())
        fail(Errc::ValidationError,
             "cannot write cache file " + tmp_path.string());
      out << entry.dump(2) << '\n';
    }
    std::filesystem::rename(tmp_path, final_path);
  }

  std::filesystem::path dir_;
  mutable std::mutex write_mutex_;
};

struct RemoteConfig {
  std::string endpoint;  // base URL; path defaults to /v1/chat/completions
  std::string api_key;
  std::string model = "main-scorer";
  int top_logprobs = 5;
  int max_retries = 3;
  int initial_backoff_ms = 100;
  int timeout_sec = 30;
};

inline RemoteConfig remote_config_from_env() {
  RemoteConfig cfg;
  if (const char* e = std::getenv("GAT_LLM_ENDPOINT")) cfg.endpoint = e;
  if (const char* k = std::getenv("GAT_LLM_API_KEY")) cfg.api_key = k;
  return cfg;
}

inline std::filesystem::path cache_dir_from_env() {
  if (const char* d = std::getenv("GAT_CACHE_DIR")) return d;
  return ".gat_cache";
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Splits "http://host:port/some/path" into the client base and the request
// path. A bare base URL gets the OpenAI-compatible completions path.
inline std::pair<std::string, std::string> split_endpoint(
    const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos)
    fail(Errc::BadConfig, "endpoint '" + endpoint + "' has no scheme");
  const auto slash = endpoint.find('/', scheme + 3);
  std::string base = endpoint.substr(0, slash);
  std::string path =
      slash == std::string::npos ? std::string() : endpoint.substr(slash);
  if (path.empty() || path == "/") path = "/v1/chat/completions";
  return {std::move(base), std::move(path)};
}

}  // namespace detail

// Minimal OpenAI-compatible chat-completions client. Temperature is pinned
// to 0 so the fallback path (reading the sampled answer letter) is
// deterministic on well-behaved servers.
class RemoteScorer {
 public:
  explicit RemoteScorer(RemoteConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.endpoint.empty())
      fail(Errc::BadConfig, "remote endpoint not configured "
                            "(set GAT_LLM_ENDPOINT)");
    auto [base, path] = detail::split_endpoint(cfg_.endpoint);
    base_ = std::move(base);
    path_ = std::move(path);
    if (cfg_.max_retries < 1) cfg_.max_retries = 1;
  }

  const RemoteConfig& config() const { return cfg_; }

  // Distribution over {true, false} read from the letter logprobs when the
  // server provides them, else from the sampled answer text.
  ProbVector score_binary(const std::string& prompt) const {
    nlohmann::json body;
    body["model"] = cfg_.model;
    body["messages"] = {{{"role", "user"}, {"content", prompt}}};
    body["temperature"] = 0.0;
    body["max_tokens"] = 1;
    body["logprobs"] = true;
    body["top_logprobs"] = cfg_.top_logprobs;

    const nlohmann::json resp = post_chat(body);
    if (auto dist = letter_masses(resp)) return normalize(*dist);

    const std::string content = detail::trim(message_content(resp));
    if (!content.empty()) {
      const char c = content[0];
      if (c == 'A' || c == 'a' || content.rfind("true", 0) == 0 ||
          content.rfind("True", 0) == 0)
        return ProbVector({1.0, 0.0});
      if (c == 'B' || c == 'b' || content.rfind("false", 0) == 0 ||
          content.rfind("False", 0) == 0)
        return ProbVector({0.0, 1.0});
    }
    fail(Errc::RemoteFailure,
         "response carried neither letter logprobs nor a recognizable "
         "answer: '" + content + "'");
  }

  // Raw assistant text, for the statement reformatter.
  std::string complete(const std::string& prompt, int max_tokens) const {
    nlohmann::json body;
    body["model"] = cfg_.model;
    body["messages"] = {{{"role", "user"}, {"content", prompt}}};
    body["temperature"] = 0.0;
    body["max_tokens"] = max_tokens;
    return detail::trim(message_content(post_chat(body)));
  }

 private:
  nlohmann::json post_chat(const nlohmann::json& body) const {
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt < cfg_.max_retries; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(
            cfg_.initial_backoff_ms << (attempt - 1)));
      httplib::Client client(base_);
      client.set_connection_timeout(cfg_.timeout_sec, 0);
      client.set_read_timeout(cfg_.timeout_sec, 0);
      if (!cfg_.api_key.empty())
        client.set_default_headers(
            {{"Authorization", "Bearer " + cfg_.api_key}});
      auto res = client.Post(path_, body.dump(), "application/json");
      if (!res) {
        last_error = "transport error " + httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        last_error = std::string("bad JSON body: ") + e.what();
      }
    }
    fail(Errc::RemoteFailure,
         "remote scorer failed after " + std::to_string(cfg_.max_retries) +
             " attempts; last error: " + last_error);
  }

  static std::string message_content(const nlohmann::json& resp) {
    try {
      return resp.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const nlohmann::json::exception&) {
      fail(Errc::RemoteFailure, "response has no choices[0].message.content");
    }
  }

  // exp(logprob) mass for the A and B answer tokens, when present.
  static std::optional<std::vector<double>> letter_masses(
      const nlohmann::json& resp) {
    try {
      const auto& top =
          resp.at("choices").at(0).at("logprobs").at("content").at(0).at(
              "top_logprobs");
      double mass_a = 0.0, mass_b = 0.0;
      bool seen = false;
      for (const auto& entry : top) {
        const std::string token =
            detail::trim(entry.at("token").get<std::string>());
        const double lp = entry.at("logprob").get<double>();
        if (token == "A" && mass_a == 0.0) {
          mass_a = std::exp(lp);
          seen = true;
        } else if (token == "B" && mass_b == 0.0) {
          mass_b = std::exp(lp);
          seen = true;
        }
      }
      if (!seen || mass_a + mass_b <= 0.0) return std::nullopt;
      return std::vector<double>{mass_a, mass_b};
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
  }

  RemoteConfig cfg_;
  std::string base_;
  std::string path_;
};

enum class ProviderMode { CacheOnly, RemoteThenCache };

// Verification-distribution provider: cache-backed, optionally fronted by
// the remote scorer. Two calls with identical prompts issue at most one
// remote request.
class NlvProvider {
 public:
  NlvProvider(std::filesystem::path cache_dir, ProviderMode mode,
              std::optional<RemoteConfig> remote = std::nullopt)
      : cache_(std::move(cache_dir)), mode_(mode) {
    if (mode_ == ProviderMode::RemoteThenCache) {
      if (!remote)
        fail(Errc::BadConfig, "remote mode requires an endpoint config");
      remote_.emplace(*remote);
    }
    model_id_ = remote ? remote->model : RemoteConfig{}.model;
  }

  const ScorerCache& cache() const { return cache_; }
  ScorerCache& cache() { return cache_; }
  const std::string& model_id() const { return model_id_; }

  std::string key_for(const std::string& prompt) const {
    return cache_key(kNlvTemplateId, prompt, model_id_);
  }

  ProbVector get_nlv_dist(const std::string& prompt) {
    const std::string key = key_for(prompt);
    if (auto hit = cache_.lookup_probs(key)) return *hit;
    if (mode_ == ProviderMode::CacheOnly)
      fail(Errc::CacheMiss, "no cached distribution under key " + key);

    std::lock_guard<std::mutex> lock(miss_mutex_);
    if (auto hit = cache_.lookup_probs(key)) return *hit;  // lost the race
    ProbVector dist = remote_->score_binary(prompt);
    cache_.store_probs(key, dist.values(), kNlvTemplateId, model_id_, prompt);
    return dist;
  }

  // Adapter for adapt_pool.
  NlvScorer as_scorer() {
    return [this](const SampleRecord&, const std::string& prompt) {
      return get_nlv_dist(prompt);
    };
  }

 private:
  ScorerCache cache_;
  ProviderMode mode_;
  std::optional<RemoteScorer> remote_;
  std::string model_id_;
  std::mutex miss_mutex_;
};

inline constexpr std::string_view kDefaultReformatInstruction =
    "Rewrite the question and its answer as a single declarative statement. "
    "Return only the statement.";

// Question+option -> statement rewriter backed by the remote endpoint, with
// the same content-hash cache in front. Failures surface as
// ReformatterFailure so render_statement can fall back to the template.
class RemoteReformatter {
 public:
  RemoteReformatter(RemoteConfig cfg, std::filesystem::path cache_dir,
                    std::string instruction =
                        std::string(kDefaultReformatInstruction))
      : cache_(std::move(cache_dir)),
        scorer_(std::move(cfg)),
        instruction_(std::move(instruction)) {}

  std::string operator()(const std::string& question,
                         const std::string& option) {
    const std::string prompt = instruction_ + "\nQuestion: " + question +
                               "\nAnswer: " + option + "\nStatement:";
    const std::string key =
        cache_key(kReformatTemplateId, prompt, scorer_.config().model);
    if (auto hit = cache_.lookup_text(key)) return *hit;

    std::string text;
    try {
      text = scorer_.complete(prompt, 128);
    } catch (const Error& e) {
      fail(Errc::ReformatterFailure, e.what());
    }
    if (text.empty())
      fail(Errc::ReformatterFailure, "reformatter returned empty text");
    cache_.store_text(key, text, kReformatTemplateId, scorer_.config().model,
                      prompt);
    return text;
  }

 private:
  ScorerCache cache_;
  RemoteScorer scorer_;
  std::string instruction_;
};

}  // namespace gat
