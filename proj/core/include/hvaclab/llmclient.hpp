#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "hvaclab/core.hpp"
#include "hvaclab/promptgen.hpp"

// Chat-completion access: an OpenAI-style HTTP client with retry/backoff, a
// deterministic in-process mock, and the integer-list parser that turns
// free-form replies back into actions.

namespace hvaclab {

struct LlmConfig {
  std::string base_url = "http://127.0.0.1:8080/v1";
  std::string model_name = "gpt-4";
  double temperature = 0.0;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  // Name of the environment variable holding the credential; the value is
  // only ever placed in the Authorization header.
  std::string api_key_env = "HVACLAB_API_KEY";
  std::chrono::milliseconds backoff_base{1000};  // doubled per retry, jittered
  int max_concurrent = 4;
};

struct LlmResponse {
  std::string raw_text;
  std::chrono::milliseconds latency{0};
  int attempt = 1;
};

class ChatModel {
 public:
  virtual ~ChatModel() = default;
  virtual LlmResponse complete(const PromptBundle& prompt) = 0;
};

// POSTs {base_url}/chat/completions, retrying transport errors and HTTP
// 429/5xx with exponential backoff. Thread-safe; at most
// cfg.max_concurrent requests are in flight at once.
class HttpChatModel : public ChatModel {
 public:
  explicit HttpChatModel(LlmConfig cfg);
  ~HttpChatModel() override;
  LlmResponse complete(const PromptBundle& prompt) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Proportional-control stand-in for a real model: reads the current-state
// section of the prompt and answers with a bracketed integer list.
class MockChatModel : public ChatModel {
 public:
  explicit MockChatModel(ScenarioConfig cfg) : cfg_(cfg) {}
  LlmResponse complete(const PromptBundle& prompt) override;

 private:
  ScenarioConfig cfg_;
};

// One-shot convenience wrapper around HttpChatModel.
LlmResponse complete(const LlmConfig& cfg, const PromptBundle& prompt);

struct ParseStats {
  std::size_t clamped = 0;  // values outside [-100, 100]
};

// Finds the last contiguous group of at least n signed integers (bracketed,
// comma- or whitespace-separated, possibly spanning lines) and returns its
// first n values, clamped into [-100, 100]. Throws ParseError otherwise.
std::vector<long long> parse_actions(const std::string& raw_text, std::size_t n,
                                     ParseStats* stats = nullptr);

// a_i = clamp(round(25 * (target - t_i)), -100, 100) over the room
// temperatures printed in the prompt's current-state section.
std::string mock_llm(const PromptBundle& prompt, const ScenarioConfig& cfg);

}  // namespace hvaclab
