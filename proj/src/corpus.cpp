#include "urank/corpus.hpp"

#include "urank/common.hpp"
#include "urank/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace urank {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

bool ieq(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

void validate_example(const Example& e, PromptFormat hint, const std::string& where) {
    if (e.id.empty()) throw ValidationError("corpus: " + where + ": empty id");
    if (e.question.empty())
        throw ValidationError("corpus: " + where + ": example '" + e.id + "' has empty question");
    if (!e.options.empty()) {
        bool answer_listed = std::any_of(e.options.begin(), e.options.end(), [&](const auto& o) {
            return o.first == e.answer || o.second == e.answer;
        });
        if (!answer_listed)
            throw ValidationError("corpus: " + where + ": example '" + e.id +
                                  "' answer matches no option label or text");
    }
    if ((hint == PromptFormat::QOA || hint == PromptFormat::SQOA) && e.options.empty())
        throw ValidationError("corpus: " + where + ": example '" + e.id +
                              "' lacks options required by format " + prompt_format_name(hint));
    if (hint == PromptFormat::SQOA && !e.statement.has_value())
        throw ValidationError("corpus: " + where + ": example '" + e.id +
                              "' lacks statement required by format sqoa");
}

Example example_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError("corpus: " + where + ": record is not an object");
    Example e;
    auto require_string = [&](const char* field) -> std::string {
        if (!j.contains(field))
            throw ParseError("corpus: " + where + ": missing field '" + field + "'");
        if (!j.at(field).is_string())
            throw ParseError("corpus: " + where + ": field '" + field + "' is not a string");
        return j.at(field).get<std::string>();
    };
    e.id = require_string("id");
    e.question = require_string("question");
    e.answer = require_string("answer");
    if (j.contains("statement")) {
        if (!j.at("statement").is_string())
            throw ParseError("corpus: " + where + ": field 'statement' is not a string");
        e.statement = j.at("statement").get<std::string>();
    }
    if (j.contains("options")) {
        const auto& opts = j.at("options");
        if (!opts.is_array())
            throw ParseError("corpus: " + where + ": field 'options' is not an array");
        for (const auto& o : opts) {
            if (!o.is_array() || o.size() != 2 || !o[0].is_string() || !o[1].is_string())
                throw ParseError("corpus: " + where +
                                 ": option entries must be [label, text] string pairs");
            e.options.emplace_back(o[0].get<std::string>(), o[1].get<std::string>());
        }
    }
    if (j.contains("meta")) {
        const auto& meta = j.at("meta");
        if (!meta.is_object())
            throw ParseError("corpus: " + where + ": field 'meta' is not an object");
        for (const auto& [k, v] : meta.items()) {
            if (!v.is_string())
                throw ParseError("corpus: " + where + ": meta value for '" + k +
                                 "' is not a string");
            e.meta[k] = v.get<std::string>();
        }
    }
    return e;
}

ordered_json example_to_json(const Example& e) {
    ordered_json j;
    j["id"] = e.id;
    j["question"] = e.question;
    j["answer"] = e.answer;
    if (e.statement) j["statement"] = *e.statement;
    if (!e.options.empty()) {
        ordered_json opts = ordered_json::array();
        for (const auto& [label, text] : e.options) opts.push_back({label, text});
        j["options"] = opts;
    }
    if (!e.meta.empty()) {
        ordered_json meta = ordered_json::object();
        for (const auto& [k, v] : e.meta) meta[k] = v;
        j["meta"] = meta;
    }
    return j;
}

void append_options(std::string& out, const Example& e) {
    out += " Options:";
    for (const auto& [label, text] : e.options) {
        out += " (" + label + ") " + text;
    }
}

}  // namespace

PromptFormat parse_prompt_format(std::string_view name) {
    std::string n = lower(name);
    std::erase_if(n, [](char c) { return c == '-' || c == '_'; });
    if (n == "qa") return PromptFormat::QA;
    if (n == "qoa") return PromptFormat::QOA;
    if (n == "sqoa") return PromptFormat::SQOA;
    throw ValidationError("corpus: unknown prompt format '" + std::string(name) + "'");
}

std::string prompt_format_name(PromptFormat format) {
    switch (format) {
        case PromptFormat::QA: return "qa";
        case PromptFormat::QOA: return "qoa";
        case PromptFormat::SQOA: return "sqoa";
    }
    return "qa";
}

std::vector<Example> load_dataset(const std::filesystem::path& path, PromptFormat format_hint) {
    std::ifstream in(path);
    if (!in) throw IoError("corpus: cannot open dataset file " + path.string());
    std::vector<Example> examples;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path.filename().string() + ":" + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& ex) {
            throw ParseError("corpus: " + where + ": malformed JSON line: " + ex.what());
        }
        Example e = example_from_json(j, where);
        validate_example(e, format_hint, where);
        if (!seen_ids.insert(e.id).second)
            throw ValidationError("corpus: " + where + ": duplicate id '" + e.id + "'");
        examples.push_back(std::move(e));
    }
    return examples;
}

void save_dataset(const std::filesystem::path& path, const std::vector<Example>& examples) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("corpus: cannot write dataset file " + path.string());
    for (const auto& e : examples) out << example_to_json(e).dump() << '\n';
    if (!out) throw IoError("corpus: failed writing dataset file " + path.string());
}

DatasetSplits split_training(const std::vector<Example>& training, std::size_t n_candidate,
                             std::size_t n_validation, std::uint64_t seed) {
    if (n_candidate + n_validation > training.size())
        throw ValidationError("corpus: requested " + std::to_string(n_candidate + n_validation) +
                              " split records but only " + std::to_string(training.size()) +
                              " are available");
    std::vector<std::size_t> order(training.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    DatasetSplits splits;
    splits.seed = seed;
    splits.candidate_pool.reserve(n_candidate);
    splits.validation.reserve(n_validation);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Example& e = training[order[i]];
        if (i < n_candidate) {
            splits.candidate_pool.push_back(e);
        } else if (i < n_candidate + n_validation) {
            splits.validation.push_back(e);
        } else {
            splits.discarded.push_back(e);
        }
    }
    return splits;
}

void write_split_report(const std::filesystem::path& path, const DatasetSplits& splits) {
    auto ids = [](const std::vector<Example>& v) {
        json out = json::array();
        for (const auto& e : v) out.push_back(e.id);
        return out;
    };
    json report;
    report["candidate_ids"] = ids(splits.candidate_pool);
    report["validation_ids"] = ids(splits.validation);
    report["discarded_ids"] = ids(splits.discarded);
    report["seed"] = splits.seed;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("corpus: cannot write split report " + path.string());
    out << report.dump(2) << '\n';
}

std::string render_shot(const Example& e, PromptFormat format) {
    validate_example(e, format, "render");
    std::string out;
    if (format == PromptFormat::SQOA) out += "Statement: " + *e.statement + " ";
    out += "Question: " + e.question;
    if (format != PromptFormat::QA) append_options(out, e);
    out += " Answer: The answer is " + e.answer + ".";
    return out;
}

std::string render_query(const Example& e, PromptFormat format) {
    validate_example(e, format, "render");
    std::string out;
    if (format == PromptFormat::SQOA) out += "Statement: " + *e.statement + " ";
    out += "Question: " + e.question;
    if (format != PromptFormat::QA) append_options(out, e);
    out += " Answer:";
    return out;
}

std::string build_prompt(const std::vector<Example>& shots, const Example& query,
                         PromptFormat format) {
    std::string prompt;
    for (const auto& shot : shots) {
        prompt += render_shot(shot, format);
        prompt += '\n';
    }
    prompt += render_query(query, format);
    return prompt;
}

std::string normalize_answer(std::string_view raw) {
    std::string s = lower(raw);

    std::size_t start = s.find_first_not_of(" \t\r\n");
    if (start == std::string::npos) return "";
    s.erase(0, start);
    constexpr std::string_view kPrefix = "the answer is";
    if (s.rfind(kPrefix, 0) == 0) s.erase(0, kPrefix.size());

    std::erase_if(s, [](char c) { return std::ispunct(static_cast<unsigned char>(c)); });

    std::istringstream words(s);
    std::string word;
    std::string out;
    while (words >> word) {
        if (word == "a" || word == "an" || word == "the") continue;
        if (!out.empty()) out += ' ';
        out += word;
    }
    return out;
}

bool match_answer(std::string_view prediction, const Example& gold, PromptFormat format) {
    const std::string norm_pred = normalize_answer(prediction);
    if (format == PromptFormat::QA || gold.options.empty())
        return norm_pred == normalize_answer(gold.answer);

    // Locate the option the gold answer names; exact match first, then
    // normalized, since dataset invariants only guarantee one of the two.
    const std::pair<std::string, std::string>* gold_option = nullptr;
    for (const auto& opt : gold.options) {
        if (opt.first == gold.answer || opt.second == gold.answer) {
            gold_option = &opt;
            break;
        }
    }
    if (!gold_option) {
        const std::string norm_answer = normalize_answer(gold.answer);
        for (const auto& opt : gold.options) {
            if (normalize_answer(opt.first) == norm_answer ||
                normalize_answer(opt.second) == norm_answer) {
                gold_option = &opt;
                break;
            }
        }
    }
    if (!gold_option) return norm_pred == normalize_answer(gold.answer);

    if (norm_pred == normalize_answer(gold_option->first)) return true;
    if (norm_pred == normalize_answer(gold_option->second)) return true;

    // "(B) something something" style outputs.
    std::string_view trimmed = prediction;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
        trimmed.remove_prefix(1);
    const std::string want = "(" + gold_option->first + ")";
    return trimmed.size() >= want.size() && ieq(trimmed.substr(0, want.size()), want);
}

}  // namespace urank
