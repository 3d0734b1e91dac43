#include "stylematch/dialogue.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stylematch/error.h"

#ifndef STYLEMATCH_DEFAULT_PACKS_DIR
#define STYLEMATCH_DEFAULT_PACKS_DIR "data/packs"
#endif

namespace stylematch {

using json = nlohmann::json;

namespace {

std::set<std::string> term_set(const TokenList& tokens) {
    std::set<std::string> terms;
    for (const auto& t : tokens) {
        if (t.is_term()) terms.insert(t.norm);
    }
    return terms;
}

std::string require_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string()) throw ParseError(where + ": '" + key + "' must be a string");
    return j[key].get<std::string>();
}

std::vector<std::string> require_string_array(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_array()) throw ParseError(where + ": '" + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& v : j[key]) {
        if (!v.is_string()) throw ParseError(where + ": '" + key + "' must contain strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

bool is_normalized_keyword(const std::string& k) {
    if (k.empty()) return false;
    const auto toks = tokenize(k);
    return toks.size() == 1 && toks.front().norm == k;
}

}  // namespace

double intent_score(const TokenList& tokens, const Intent& intent) {
    std::set<std::string> norms;
    for (const auto& t : tokens) norms.insert(t.norm);
    double best = 0.0;
    for (const auto& pattern : intent.patterns) {
        if (pattern.empty()) continue;
        std::size_t hit = 0;
        for (const auto& keyword : pattern) hit += norms.count(keyword);
        best = std::max(best, static_cast<double>(hit) / static_cast<double>(pattern.size()));
    }
    return best;
}

const Intent* match_intent(const TokenList& tokens, const TaskPack& pack) {
    if (tokens.empty()) return nullptr;
    const Intent* best = nullptr;
    double best_score = 0.0;
    for (const auto& intent : pack.intents) {
        const double score = intent_score(tokens, intent);
        if (score <= 0.0 || score < intent.threshold) continue;
        if (!best || score > best_score || (score == best_score && intent.id < best->id)) {
            best = &intent;
            best_score = score;
        }
    }
    return best;
}

std::vector<double> corpus_scores(const TokenList& user_tokens, const TaskPack& pack) {
    const std::size_t n = pack.response_corpus.size();
    std::vector<std::set<std::string>> docs;
    docs.reserve(n);
    std::map<std::string, int> df;
    for (const auto& text : pack.response_corpus) {
        docs.push_back(term_set(tokenize(text)));
        for (const auto& t : docs.back()) ++df[t];
    }
    const auto idf = [&](const std::string& term) {
        const auto it = df.find(term);
        const double freq = it == df.end() ? 1.0 : static_cast<double>(it->second);
        return std::log(1.0 + static_cast<double>(n) / freq);
    };

    const auto user = term_set(user_tokens);
    double user_norm = 0.0;
    for (const auto& t : user) user_norm += idf(t) * idf(t);
    user_norm = std::sqrt(user_norm);

    std::vector<double> scores(n, 0.0);
    if (user_norm == 0.0) return scores;
    for (std::size_t i = 0; i < n; ++i) {
        double overlap = 0.0;
        double doc_norm = 0.0;
        for (const auto& t : docs[i]) {
            const double w = idf(t);
            doc_norm += w * w;
            if (user.count(t)) overlap += w * w;
        }
        if (doc_norm > 0.0) scores[i] = overlap / (user_norm * std::sqrt(doc_norm));
    }
    return scores;
}

std::vector<Candidate> generate_candidates(const TokenList& user_tokens, const TaskPack& pack, int k) {
    if (pack.response_corpus.empty()) throw InvalidArgument("task pack '" + pack.task_id + "' has an empty response corpus");
    if (k < 1) throw InvalidArgument("k must be at least 1");

    // Quantized so mathematically equal scores tie exactly regardless of
    // summation order; ties then fall back to corpus order.
    const std::vector<double> scores = corpus_scores(user_tokens, pack);
    std::vector<long long> keys(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) keys[i] = std::llround(scores[i] * 1e12);
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });

    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    std::vector<Candidate> out;
    out.reserve(take);
    for (std::size_t r = 0; r < take; ++r) {
        Candidate c;
        c.text = pack.response_corpus[order[r]];
        c.model_rank = static_cast<int>(r);
        out.push_back(std::move(c));
    }
    return out;
}

const std::string& select_scripted(const Intent& intent, std::uint64_t turn_seed) {
    if (intent.responses.empty()) throw InvalidArgument("intent '" + intent.id + "' has no responses");
    return intent.responses[static_cast<std::size_t>(turn_seed % intent.responses.size())];
}

TaskPack parse_pack(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("pack must be a JSON object");
    if (j.contains("schema_version") && j["schema_version"] != kPackSchema) {
        throw ParseError("unsupported pack schema_version " + j["schema_version"].dump());
    }

    TaskPack pack;
    pack.task_id = require_string(j, "task_id", "pack");
    if (j.contains("description")) pack.description = require_string(j, "description", "pack");

    if (!j.contains("intents") || !j["intents"].is_array()) throw ParseError("pack: 'intents' must be an array");
    for (std::size_t i = 0; i < j["intents"].size(); ++i) {
        const json& ji = j["intents"][i];
        const std::string where = "intents[" + std::to_string(i) + "]";
        if (!ji.is_object()) throw ParseError(where + " must be an object");
        Intent intent;
        intent.id = require_string(ji, "id", where);
        if (!ji.contains("patterns") || !ji["patterns"].is_array()) {
            throw ParseError(where + ": 'patterns' must be an array of keyword arrays");
        }
        for (const auto& p : ji["patterns"]) {
            if (!p.is_array()) throw ParseError(where + ": each pattern must be an array of keywords");
            std::vector<std::string> keywords;
            for (const auto& k : p) {
                if (!k.is_string()) throw ParseError(where + ": keywords must be strings");
                keywords.push_back(k.get<std::string>());
            }
            intent.patterns.push_back(std::move(keywords));
        }
        intent.responses = require_string_array(ji, "responses", where);
        if (ji.contains("threshold")) {
            if (!ji["threshold"].is_number()) throw ParseError(where + ": 'threshold' must be a number");
            intent.threshold = ji["threshold"].get<double>();
        }
        pack.intents.push_back(std::move(intent));
    }

    if (!j.contains("response_corpus") || !j["response_corpus"].is_array()) {
        throw ParseError("pack: 'response_corpus' must be an array");
    }
    for (std::size_t i = 0; i < j["response_corpus"].size(); ++i) {
        const json& entry = j["response_corpus"][i];
        const std::string where = "response_corpus[" + std::to_string(i) + "]";
        if (entry.is_string()) {
            pack.response_corpus.push_back(entry.get<std::string>());
        } else if (entry.is_object()) {
            pack.response_corpus.push_back(require_string(entry, "text", where));
            if (entry.contains("variants")) {
                for (auto& v : require_string_array(entry, "variants", where)) pack.response_corpus.push_back(std::move(v));
            }
        } else {
            throw ParseError(where + " must be a string or {text, variants}");
        }
    }
    return pack;
}

std::vector<std::string> lint_pack(const TaskPack& pack) {
    std::vector<std::string> issues;
    if (pack.task_id.empty()) issues.push_back("task_id is empty");
    const std::size_t n = pack.intents.size();
    if (n < kMinPackIntents || n > kMaxPackIntents) {
        issues.push_back("pack has " + std::to_string(n) + " intents; expected " + std::to_string(kMinPackIntents) +
                         " to " + std::to_string(kMaxPackIntents));
    }
    std::set<std::string> ids;
    for (const auto& intent : pack.intents) {
        const std::string where = "intent '" + intent.id + "'";
        if (intent.id.empty()) issues.push_back("intent with empty id");
        if (!ids.insert(intent.id).second) issues.push_back("duplicate intent id '" + intent.id + "'");
        if (intent.patterns.empty()) issues.push_back(where + " has no patterns");
        for (const auto& pattern : intent.patterns) {
            if (pattern.empty()) issues.push_back(where + " has an empty pattern");
            for (const auto& k : pattern) {
                if (!is_normalized_keyword(k)) {
                    issues.push_back(where + " keyword '" + k + "' is not a single lowercase token");
                }
            }
        }
        if (intent.responses.empty()) issues.push_back(where + " has no responses");
        for (const auto& r : intent.responses) {
            if (tokenize(r).empty()) issues.push_back(where + " has an empty response");
        }
        if (!(intent.threshold > 0.0 && intent.threshold <= 1.0)) {
            issues.push_back(where + " threshold must be in (0, 1]");
        }
    }
    if (pack.response_corpus.size() < kMinCorpusSize) {
        issues.push_back("response_corpus has " + std::to_string(pack.response_corpus.size()) +
                         " entries; expected at least " + std::to_string(kMinCorpusSize));
    }
    for (std::size_t i = 0; i < pack.response_corpus.size(); ++i) {
        if (tokenize(pack.response_corpus[i]).empty()) {
            issues.push_back("response_corpus entry " + std::to_string(i) + " is empty");
        }
    }
    return issues;
}

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<std::string> lint_pack_file(const std::filesystem::path& path) {
    try {
        return lint_pack(parse_pack(slurp(path)));
    } catch (const Error& e) {
        return {e.what()};
    }
}

TaskPack load_pack(const std::filesystem::path& path) {
    TaskPack pack;
    try {
        pack = parse_pack(slurp(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    const auto issues = lint_pack(pack);
    if (!issues.empty()) {
        std::string msg = path.string() + ": invalid task pack";
        for (const auto& i : issues) msg += "; " + i;
        throw ParseError(msg);
    }
    return pack;
}

PackRegistry PackRegistry::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw NotFound("task pack directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    PackRegistry reg;
    for (const auto& f : files) reg.add(load_pack(f));
    return reg;
}

void PackRegistry::add(TaskPack pack) {
    const std::string id = pack.task_id;
    if (packs_.count(id)) throw InvalidArgument("duplicate task pack '" + id + "'");
    packs_.emplace(id, std::make_shared<const TaskPack>(std::move(pack)));
}

std::shared_ptr<const TaskPack> PackRegistry::find(const std::string& task_id) const {
    const auto it = packs_.find(task_id);
    return it == packs_.end() ? nullptr : it->second;
}

std::vector<std::string> PackRegistry::task_ids() const {
    std::vector<std::string> ids;
    for (const auto& [id, _] : packs_) ids.push_back(id);
    return ids;
}

std::filesystem::path default_packs_dir() {
    if (const char* env = std::getenv("STYLEMATCH_PACKS_DIR"); env && *env) return env;
    return STYLEMATCH_DEFAULT_PACKS_DIR;
}

}  // namespace stylematch
