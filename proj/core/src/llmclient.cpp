#include "hvaclab/llmclient.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hvaclab/rng.hpp"
#include "hvaclab/translate.hpp"

namespace hvaclab {

namespace {

// Splits "http://host:port/v1" into client origin and path prefix.
void split_base_url(const std::string& base_url, std::string* origin, std::string* prefix) {
  const auto scheme_end = base_url.find("://");
  const std::size_t host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_begin = base_url.find('/', host_begin);
  if (path_begin == std::string::npos) {
    *origin = base_url;
    prefix->clear();
  } else {
    *origin = base_url.substr(0, path_begin);
    *prefix = base_url.substr(path_begin);
  }
  while (!prefix->empty() && prefix->back() == '/') prefix->pop_back();
}

std::string extract_content(const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ProtocolError("response body is not JSON");
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    throw ProtocolError("response has no choices");
  }
  const auto& first = j["choices"][0];
  if (first.contains("message") && first["message"].contains("content")) {
    return first["message"]["content"].get<std::string>();
  }
  if (first.contains("text")) return first["text"].get<std::string>();
  throw ProtocolError("response choice has no message content");
}

}  // namespace

struct HttpChatModel::Impl {
  LlmConfig cfg;
  std::string origin;
  std::string path;
  std::mutex mu;
  std::condition_variable cv;
  int in_flight = 0;
  std::mt19937_64 jitter{0x4a495454u};

  void acquire_slot() {
    std::unique_lock lock(mu);
    cv.wait(lock, [this] { return in_flight < cfg.max_concurrent; });
    ++in_flight;
  }
  void release_slot() {
    {
      std::lock_guard lock(mu);
      --in_flight;
    }
    cv.notify_one();
  }
  double jitter_factor() {
    std::lock_guard lock(mu);
    return 0.5 + uniform_double(jitter);  // [0.5, 1.5)
  }
};

HttpChatModel::HttpChatModel(LlmConfig cfg) : impl_(std::make_unique<Impl>()) {
  if (cfg.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (cfg.max_concurrent < 1) throw ConfigError("max_concurrent must be >= 1");
  impl_->cfg = std::move(cfg);
  split_base_url(impl_->cfg.base_url, &impl_->origin, &impl_->path);
}

HttpChatModel::~HttpChatModel() = default;

LlmResponse HttpChatModel::complete(const PromptBundle& prompt) {
  const LlmConfig& cfg = impl_->cfg;

  nlohmann::json body;
  body["model"] = cfg.model_name;
  body["temperature"] = cfg.temperature;
  body["messages"] = nlohmann::json::array(
      {nlohmann::json{{"role", "user"}, {"content", prompt.full_text}}});
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!cfg.api_key_env.empty()) {
    if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  const auto start = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 1; attempt <= cfg.max_retries + 1; ++attempt) {
    if (attempt > 1) {
      const double base = static_cast<double>(cfg.backoff_base.count());
      const double delay = base * std::pow(2.0, attempt - 2) * impl_->jitter_factor();
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long long>(delay)));
    }

    impl_->acquire_slot();
    httplib::Client client(impl_->origin);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout));
    auto res = client.Post(impl_->path + "/chat/completions", headers, payload,
                           "application/json");
    impl_->release_slot();

    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError("HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    LlmResponse out;
    out.raw_text = extract_content(res->body);
    out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    out.attempt = attempt;
    return out;
  }
  throw TransportError("chat completion failed after " +
                       std::to_string(cfg.max_retries + 1) + " attempts: " + last_error);
}

LlmResponse complete(const LlmConfig& cfg, const PromptBundle& prompt) {
  HttpChatModel model(cfg);
  return model.complete(prompt);
}

std::vector<long long> parse_actions(const std::string& raw_text, std::size_t n,
                                     ParseStats* stats) {
  if (n < 1) throw ConfigError("parse_actions: n must be >= 1");

  // Tokenize into signed integers; any character other than digits, a sign
  // directly before a digit, whitespace, commas/semicolons or (square)
  // brackets breaks the group.
  std::vector<std::vector<long long>> groups;
  std::vector<long long> current;
  auto break_group = [&] {
    if (!current.empty()) {
      groups.push_back(current);
      current.clear();
    }
  };

  const std::size_t len = raw_text.size();
  std::size_t i = 0;
  while (i < len) {
    const char c = raw_text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',' || c == ';' ||
        c == '[' || c == ']' || c == '(' || c == ')') {
      ++i;
      continue;
    }
    bool negative = false;
    std::size_t j = i;
    if ((c == '-' || c == '+') && j + 1 < len && std::isdigit(static_cast<unsigned char>(raw_text[j + 1]))) {
      negative = c == '-';
      ++j;
    }
    if (j < len && std::isdigit(static_cast<unsigned char>(raw_text[j]))) {
      long long value = 0;
      while (j < len && std::isdigit(static_cast<unsigned char>(raw_text[j]))) {
        value = value * 10 + (raw_text[j] - '0');
        if (value > 1000000) value = 1000000;  // keep absurd numbers clampable
        ++j;
      }
      current.push_back(negative ? -value : value);
      i = j;
      continue;
    }
    break_group();
    ++i;
  }
  break_group();

  const std::vector<long long>* hit = nullptr;
  for (const auto& g : groups) {
    if (g.size() >= n) hit = &g;  // keep the last qualifying group
  }
  if (!hit) {
    throw ParseError("no group of " + std::to_string(n) + " integers in response");
  }
  std::vector<long long> out(hit->begin(), hit->begin() + static_cast<std::ptrdiff_t>(n));
  std::size_t clamped = 0;
  for (long long& v : out) {
    if (v < -100 || v > 100) {
      v = std::clamp(v, -100LL, 100LL);
      ++clamped;
    }
  }
  if (stats) stats->clamped += clamped;
  return out;
}

std::string mock_llm(const PromptBundle& prompt, const ScenarioConfig& cfg) {
  const std::string& text = prompt.full_text;
  const auto anchor = text.rfind("Current state:\n");
  if (anchor == std::string::npos) {
    throw ProtocolError("mock_llm: prompt has no current-state section");
  }

  std::vector<double> temps;
  double target = 0.0;
  bool have_target = false;
  std::size_t pos = anchor;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    const std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos
                                                                       : eol - pos);
    double value = 0.0;
    if (std::sscanf(line.c_str(), "Room %*d temperature: %lf degrees", &value) == 1) {
      temps.push_back(value);
    } else if (std::sscanf(line.c_str(), "The target temperature is %lf degrees", &value) == 1) {
      target = value;
      have_target = true;
      break;  // target line closes the state block
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  if (temps.empty() || !have_target) {
    throw ProtocolError("mock_llm: could not read room temperatures and target");
  }
  if (std::abs(target - cfg.target_temp) > 0.5) {
    throw ProtocolError("mock_llm: prompt target disagrees with scenario target");
  }

  std::string out = "[";
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const long long a =
        std::clamp(round_int(25.0 * (target - temps[i])), -100LL, 100LL);
    if (i) out += ", ";
    out += std::to_string(a);
  }
  out += "]";
  return out;
}

LlmResponse MockChatModel::complete(const PromptBundle& prompt) {
  LlmResponse out;
  out.raw_text = mock_llm(prompt, cfg_);
  out.attempt = 1;
  return out;
}

}  // namespace hvaclab
