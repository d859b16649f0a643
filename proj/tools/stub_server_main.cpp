// radlite-stub-server: a canned completion-protocol server for exercising
// the infer/bench commands without a real model runtime. Responds to
// POST /v1/completions and GET /props.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

namespace {

struct Rule {
  std::string contains;  // substring of the prompt; empty matches everything
  std::string text;
  std::uint64_t completion_tokens = 0;  // 0 -> omit usage
  double predicted_ms = 0.0;            // 0 -> omit timings
};

std::vector<Rule> default_rules() {
  return {
      {"[TASK: rads_assignment]", "BI-RADS 4A", 4, 120.0},
      {"[TASK: nli]", "neutral", 1, 80.0},
      {"[TASK: n_staging]", "N1", 1, 80.0},
      {"[TASK: m_staging]", "M0", 1, 80.0},
      {"", "Stable examination without acute findings.", 6, 200.0},
  };
}

std::vector<Rule> load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open script file: " + path);
  nlohmann::json j;
  in >> j;
  std::vector<Rule> rules;
  for (const auto& r : j) {
    Rule rule;
    rule.contains = r.value("contains", "");
    rule.text = r.at("text").get<std::string>();
    rule.completion_tokens = r.value("completion_tokens", std::uint64_t{0});
    rule.predicted_ms = r.value("predicted_ms", 0.0);
    rules.push_back(std::move(rule));
  }
  return rules;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radlite-stub-server: canned completion server for testing"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string script;
  std::int64_t threads = 4;
  std::string quantization = "Q4_K_M";
  std::uint64_t model_size = 0;
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->capture_default_str();
  app.add_option("--script", script,
                 "JSON array of {contains, text, completion_tokens, predicted_ms}");
  app.add_option("--threads", threads, "Reported via /props")->capture_default_str();
  app.add_option("--quantization", quantization, "Reported via /props")
      ->capture_default_str();
  app.add_option("--model-size-bytes", model_size, "Reported via /props");
  CLI11_PARSE(app, argc, argv);

  std::vector<Rule> rules;
  try {
    rules = script.empty() ? default_rules() : load_rules(script);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  httplib::Server server;
  server.Post("/v1/completions", [&](const httplib::Request& req,
                                     httplib::Response& res) {
    nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
    const std::string prompt =
        body.is_object() ? body.value("prompt", "") : std::string();
    const Rule* match = nullptr;
    for (const auto& rule : rules) {
      if (rule.contains.empty() ||
          prompt.find(rule.contains) != std::string::npos) {
        match = &rule;
        break;
      }
    }
    nlohmann::json out;
    out["choices"] =
        nlohmann::json::array({{{"text", match ? match->text : ""}}});
    if (match && match->completion_tokens > 0) {
      out["usage"] = {{"completion_tokens", match->completion_tokens},
                      {"prompt_tokens", 32}};
    }
    if (match && match->predicted_ms > 0.0) {
      out["timings"] = {{"predicted_ms", match->predicted_ms}};
    }
    res.set_content(out.dump(), "application/json");
  });
  server.Get("/props", [&](const httplib::Request&, httplib::Response& res) {
    nlohmann::json j;
    j["threads"] = threads;
    j["quantization"] = quantization;
    if (model_size > 0) j["model_size_bytes"] = model_size;
    res.set_content(j.dump(), "application/json");
  });
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  std::cout << "listening on http://" << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "error: failed to bind " << host << ":" << port << "\n";
    return 3;
  }
  return 0;
}
