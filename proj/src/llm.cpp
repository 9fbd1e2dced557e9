#include "urank/llm.hpp"

#include "urank/common.hpp"
#include "urank/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>
#include <unordered_set>

namespace urank {

namespace {

using json = nlohmann::json;

std::string env_api_key(const std::string& env_name) {
    if (env_name.empty()) return {};
    const char* value = std::getenv(env_name.c_str());
    return value ? std::string(value) : std::string{};
}

void append_transcript_record(const std::filesystem::path& path, const std::string& hash,
                              const std::string& model, const std::string& prompt,
                              const std::string& response) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("llm: cannot append to transcript " + path.string());
    json j;
    j["hash"] = hash;
    j["model"] = model;
    j["prompt"] = prompt;
    j["response"] = response;
    j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    out << j.dump() << '\n';
}

}  // namespace

std::string prompt_hash(std::string_view model, std::string_view prompt) {
    std::string keyed;
    keyed.reserve(model.size() + 1 + prompt.size());
    keyed.append(model);
    keyed.push_back('\n');
    keyed.append(prompt);
    return to_hex(fnv1a64(keyed));
}

SyntheticOracleBackend::SyntheticOracleBackend(OracleRule rule) : rule_(rule) {
    if (rule_.easy_slack < 0)
        throw ValidationError("llm: oracle easy_slack must be non-negative");
    if (rule_.hard_min_helpful < 1)
        throw ValidationError("llm: oracle hard_min_helpful must be at least 1");
}

std::string SyntheticOracleBackend::complete(const std::string&, const Example& query,
                                             const std::vector<Example>& shots) {
    const auto difficulty = query.meta_value("difficulty");
    if (!difficulty)
        throw ValidationError("llm: oracle query '" + query.id + "' lacks meta.difficulty");
    const auto topic = query.meta_value("topic").value_or("");

    int helpful = 0;
    int misleading = 0;
    for (const auto& shot : shots) {
        if (shot.meta_value("topic").value_or("") != topic) continue;
        const auto role = shot.meta_value("role").value_or("neutral");
        if (role == "helpful") ++helpful;
        if (role == "misleading") ++misleading;
    }

    bool correct;
    if (*difficulty == "easy") {
        correct = misleading <= helpful + rule_.easy_slack;
    } else if (*difficulty == "hard") {
        correct = helpful >= rule_.hard_min_helpful && helpful > misleading;
    } else {
        throw ValidationError("llm: oracle query '" + query.id + "' has unknown difficulty '" +
                              *difficulty + "'");
    }
    return correct ? query.answer : kWrongAnswer;
}

ReplayBackend::ReplayBackend(const std::filesystem::path& transcript_path, std::string model)
    : model_(std::move(model)) {
    std::ifstream in(transcript_path);
    if (!in) throw IoError("llm: cannot open transcript " + transcript_path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& ex) {
            throw ParseError("llm: transcript " + transcript_path.filename().string() + ":" +
                             std::to_string(line_no) + ": " + ex.what());
        }
        responses_[j.at("hash").get<std::string>()] = j.at("response").get<std::string>();
    }
}

std::string ReplayBackend::complete(const std::string& prompt, const Example&,
                                    const std::vector<Example>&) {
    const std::string hash = prompt_hash(model_, prompt);
    auto it = responses_.find(hash);
    if (it == responses_.end())
        throw CacheMissError("llm: transcript has no entry for hash " + hash);
    return it->second;
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty())
        throw ValidationError("llm: http backend needs an endpoint");
    if (config_.transcript_path.empty())
        throw ValidationError("llm: http backend needs a transcript path");
}

std::string HttpChatBackend::complete(const std::string& prompt, const Example&,
                                      const std::vector<Example>&) {
    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(0, config_.timeout_ms * 1000);
    client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    const std::string api_key = env_api_key(config_.api_key_env);
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    json body;
    body["model"] = config_.model;
    body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = 0;
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
        auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        std::string text;
        try {
            json j = json::parse(res->body);
            text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception& ex) {
            throw TransportError(std::string("llm: malformed chat completion response: ") +
                                 ex.what());
        }
        {
            std::lock_guard<std::mutex> lock(transcript_mutex_);
            append_transcript_record(config_.transcript_path,
                                     prompt_hash(config_.model, prompt), config_.model, prompt,
                                     text);
        }
        return text;
    }
    throw TransportError("llm: chat completion failed after " +
                         std::to_string(config_.retries + 1) + " attempts: " + last_error);
}

TranscriptStats transcript_stats(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("llm: cannot open transcript " + path.string());
    TranscriptStats stats;
    std::unordered_set<std::string> hashes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& ex) {
            throw ParseError("llm: transcript " + path.filename().string() + ":" +
                             std::to_string(line_no) + ": " + ex.what());
        }
        if (!j.is_object() || !j.contains("hash") || !j.contains("response"))
            throw ParseError("llm: transcript " + path.filename().string() + ":" +
                             std::to_string(line_no) + ": record needs 'hash' and 'response'");
        ++stats.entries;
        hashes.insert(j.at("hash").get<std::string>());
    }
    stats.unique_prompts = hashes.size();
    return stats;
}

}  // namespace urank
