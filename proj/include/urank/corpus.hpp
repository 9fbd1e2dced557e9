#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace urank {

// One QA record: the atom of candidate pools, prompts and rewards.
struct Example {
    std::string id;
    std::string question;
    std::string answer;
    std::optional<std::string> statement;
    // Ordered (label, text) pairs; empty means no options.
    std::vector<std::pair<std::string, std::string>> options;
    std::map<std::string, std::string> meta;

    std::optional<std::string> meta_value(const std::string& key) const {
        auto it = meta.find(key);
        if (it == meta.end()) return std::nullopt;
        return it->second;
    }
};

enum class PromptFormat { QA, QOA, SQOA };

PromptFormat parse_prompt_format(std::string_view name);
std::string prompt_format_name(PromptFormat format);

struct DatasetSplits {
    std::vector<Example> candidate_pool;
    std::vector<Example> validation;
    std::vector<Example> test;
    std::vector<Example> discarded;
    std::uint64_t seed = 0;
};

// Reads a JSONL dataset (one Example object per line, fields: id, question,
// answer, statement, options, meta; absent optionals omitted). Validates the
// Example invariants plus the format hint's requirements.
std::vector<Example> load_dataset(const std::filesystem::path& path, PromptFormat format_hint);

void save_dataset(const std::filesystem::path& path, const std::vector<Example>& examples);

// Seeded random division of the training set into candidate pool and
// validation set. Leftover records land in `discarded`, never silently lost.
DatasetSplits split_training(const std::vector<Example>& training, std::size_t n_candidate,
                             std::size_t n_validation, std::uint64_t seed);

// {candidate_ids, validation_ids, discarded_ids, seed} as JSON.
void write_split_report(const std::filesystem::path& path, const DatasetSplits& splits);

// Renders one retrieved example per its template, answer included.
std::string render_shot(const Example& example, PromptFormat format);

// Renders the query with a trailing "Answer:" and no answer.
std::string render_query(const Example& example, PromptFormat format);

// Full prompt: shots in order, then the query, joined by single newlines.
std::string build_prompt(const std::vector<Example>& shots, const Example& query,
                         PromptFormat format);

// Lowercase, strip leading "the answer is", drop punctuation, drop articles
// (a/an/the) as whole words, collapse whitespace. Idempotent.
std::string normalize_answer(std::string_view raw);

// Open-ended: normalized equality. Multi-choice: normalized prediction equals
// the gold option's label or text, or the raw prediction starts with
// "(<label>)".
bool match_answer(std::string_view prediction, const Example& gold, PromptFormat format);

}  // namespace urank
