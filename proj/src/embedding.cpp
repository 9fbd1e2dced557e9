#include "urank/embedding.hpp"

#include "urank/bm25.hpp"
#include "urank/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <thread>

namespace urank {

namespace {

using json = nlohmann::json;

Vector vector_from_json(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty())
        throw ParseError("embedding: " + where + ": 'vector' must be a non-empty array");
    Vector v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw ParseError("embedding: " + where + ": vector entries must be numbers");
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    if (!v.allFinite())
        throw ValidationError("embedding: " + where + ": vector has non-finite entries");
    return v;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

// Role directions depend only on (role, dim): fixtures emitted with different
// seeds keep the same geometry, which is what makes trained params portable
// across fixture datasets. Every role shares a common component; the
// role-specific part is a third of the magnitude, so an untrained ranking
// interleaves roles instead of segregating them into blocks.
Vector role_offset(const std::string& role, int dim) {
    if (role.empty()) return Vector::Zero(dim);
    auto unit = [dim](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
        v.normalize();
        return v;
    };
    constexpr double kRolePart = 1.0 / 3.0;
    Vector v = std::sqrt(1.0 - kRolePart * kRolePart) * unit(fnv1a64("role-common")) +
               kRolePart * unit(fnv1a64(role) ^ 0x517cc1b727220a95ull);
    v.normalize();
    return v;
}

}  // namespace

FileEmbeddingProvider::FileEmbeddingProvider(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("embedding: cannot open embedding file " + path.string());
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
            throw ParseError("embedding: " + where + ": malformed JSON line: " + ex.what());
        }
        if (!j.is_object() || !j.contains("id") || !j.contains("vector"))
            throw ParseError("embedding: " + where + ": record needs 'id' and 'vector'");
        Vector v = vector_from_json(j.at("vector"), where);
        if (dimension_ == 0) {
            dimension_ = static_cast<int>(v.size());
        } else if (static_cast<int>(v.size()) != dimension_) {
            throw ValidationError("embedding: " + where + ": dimension " +
                                  std::to_string(v.size()) + " does not match established " +
                                  std::to_string(dimension_));
        }
        vectors_[j.at("id").get<std::string>()] = std::move(v);
    }
    if (vectors_.empty())
        throw ValidationError("embedding: embedding file " + path.string() + " is empty");
}

Vector FileEmbeddingProvider::embed(const std::string& key, const std::string&) {
    auto it = vectors_.find(key);
    if (it == vectors_.end())
        throw ValidationError("embedding: key '" + key + "' not found in embedding file");
    return it->second;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEmbeddingConfig config)
    : config_(std::move(config)), dimension_(config_.dimension) {
    if (config_.endpoint.empty())
        throw ValidationError("embedding: http provider needs an endpoint");
    if (config_.cache_dir) std::filesystem::create_directories(*config_.cache_dir);
}

Vector HttpEmbeddingProvider::embed(const std::string&, const std::string& text) {
    const std::string content_key = to_hex(fnv1a64(text));
    std::filesystem::path cache_file;
    if (config_.cache_dir) {
        cache_file = *config_.cache_dir / (content_key + ".json");
        if (std::filesystem::exists(cache_file)) {
            std::ifstream in(cache_file);
            json j;
            in >> j;
            Vector v = vector_from_json(j.at("vector"), cache_file.string());
            check_dimension(v);
            return v;
        }
    }

    Vector v = fetch(text);
    check_dimension(v);

    if (config_.cache_dir) {
        // Write-once per key: stage to a temp file, then rename into place.
        json j;
        j["vector"] = vector_to_json(v);
        const auto tmp = cache_file.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw IoError("embedding: cannot write cache file " + tmp);
            out << j.dump() << '\n';
        }
        std::filesystem::rename(tmp, cache_file);
    }
    return v;
}

void HttpEmbeddingProvider::check_dimension(const Vector& v) {
    if (dimension_ == 0) {
        dimension_ = static_cast<int>(v.size());
    } else if (static_cast<int>(v.size()) != dimension_) {
        throw ValidationError("embedding: got dimension " + std::to_string(v.size()) +
                              ", expected " + std::to_string(dimension_));
    }
}

Vector HttpEmbeddingProvider::fetch(const std::string& text) {
    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(0, config_.timeout_ms * 1000);
    client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()))
            headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    json body;
    body["input"] = json::array({text});
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(100 * attempt));
        auto res = client.Post("/embed", headers, body.dump(), "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        try {
            json j = json::parse(res->body);
            return vector_from_json(j.at("data").at(0).at("embedding"), "/embed response");
        } catch (const json::exception& ex) {
            throw TransportError(std::string("embedding: malformed /embed response: ") +
                                 ex.what());
        }
    }
    throw TransportError("embedding: /embed failed after " + std::to_string(config_.retries + 1) +
                         " attempts: " + last_error);
}

const Vector& EmbeddingTable::at(const std::string& id) const {
    auto it = vectors.find(id);
    if (it == vectors.end())
        throw ValidationError("embedding: no vector for id '" + id + "'");
    return it->second;
}

void add_embeddings(EmbeddingTable& table, EmbeddingProvider& provider,
                    const std::vector<Example>& examples) {
    for (const auto& e : examples) {
        Vector v = provider.embed(e.id, retrieval_text(e));
        if (table.dim == 0) table.dim = static_cast<int>(v.size());
        if (static_cast<int>(v.size()) != table.dim)
            throw ValidationError("embedding: vector for '" + e.id + "' has dimension " +
                                  std::to_string(v.size()) + ", table uses " +
                                  std::to_string(table.dim));
        table.vectors[e.id] = std::move(v);
    }
}

FixturePaths emit_fixtures(const FixtureSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.dim < spec.n_topics)
        throw ValidationError("embedding: fixture dim must be at least n_topics");
    if (spec.n_topics < 1 || spec.n_examples < 1 || spec.n_queries < 1)
        throw ValidationError("embedding: fixture counts must be at least 1");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("embedding: cannot create fixture directory " + out_dir.string());

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto noise = [&]() {
        Vector v(spec.dim);
        for (int i = 0; i < spec.dim; ++i) v[i] = gauss(rng);
        return v;
    };
    auto topic_axis = [&](int topic) {
        Vector v = Vector::Zero(spec.dim);
        v[topic] = 1.0;
        return v;
    };

    static const char* kRoles[] = {"helpful", "misleading", "neutral"};

    std::vector<Example> pool;
    std::vector<std::pair<std::string, Vector>> embeddings;
    pool.reserve(static_cast<std::size_t>(spec.n_examples));

    // Pool: topic-major blocks, roles cycling within each topic.
    int emitted = 0;
    for (int topic = 0; topic < spec.n_topics; ++topic) {
        const int count = spec.n_examples / spec.n_topics +
                          (topic < spec.n_examples % spec.n_topics ? 1 : 0);
        for (int j = 0; j < count; ++j, ++emitted) {
            const std::string role = kRoles[j % 3];
            Example e;
            e.id = "c" + std::to_string(emitted);
            e.question = "What is entry c" + std::to_string(emitted) + " of subject" +
                         std::to_string(topic) + "?";
            e.answer = "entity" + std::to_string(topic);
            e.meta["topic"] = std::to_string(topic);
            e.meta["role"] = role;
            Vector v = topic_axis(topic) + 0.3 * role_offset(role, spec.dim) + 0.05 * noise();
            v.normalize();
            embeddings.emplace_back(e.id, std::move(v));
            pool.push_back(std::move(e));
        }
    }

    auto make_queries = [&](char tag) {
        std::vector<Example> queries;
        queries.reserve(static_cast<std::size_t>(spec.n_queries));
        for (int j = 0; j < spec.n_queries; ++j) {
            const int topic = j % spec.n_topics;
            Example e;
            e.id = std::string(1, tag) + std::to_string(j);
            e.question = "What is entry " + e.id + " of subject" + std::to_string(topic) + "?";
            e.answer = "entity" + std::to_string(topic);
            e.meta["topic"] = std::to_string(topic);
            // Alternate difficulty per topic cycle so every topic sees both.
            e.meta["difficulty"] = ((j / spec.n_topics) % 2 == 0) ? "easy" : "hard";
            Vector v = topic_axis(topic) + 0.05 * noise();
            v.normalize();
            embeddings.emplace_back(e.id, std::move(v));
            queries.push_back(std::move(e));
        }
        return queries;
    };
    const auto validation = make_queries('v');
    const auto test = make_queries('t');

    FixturePaths paths;
    paths.pool = out_dir / "pool.jsonl";
    paths.validation = out_dir / "validation.jsonl";
    paths.test = out_dir / "test.jsonl";
    paths.embeddings = out_dir / "embeddings.jsonl";
    save_dataset(paths.pool, pool);
    save_dataset(paths.validation, validation);
    save_dataset(paths.test, test);

    std::ofstream out(paths.embeddings, std::ios::trunc);
    if (!out) throw IoError("embedding: cannot write " + paths.embeddings.string());
    for (const auto& [id, v] : embeddings) {
        json j;
        j["id"] = id;
        j["vector"] = vector_to_json(v);
        out << j.dump() << '\n';
    }
    return paths;
}

}  // namespace urank
