#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stylematch/ranker.h"
#include "stylematch/text_style.h"

namespace stylematch {

inline constexpr int kDefaultTopK = 10;
inline constexpr std::size_t kMinPackIntents = 10;
inline constexpr std::size_t kMaxPackIntents = 15;
inline constexpr std::size_t kMinCorpusSize = 10;
inline constexpr std::string_view kPackSchema = "stylematch.pack/1";

struct Intent {
    std::string id;
    std::vector<std::vector<std::string>> patterns;  // each set must fully appear as token norms
    std::vector<std::string> responses;
    double threshold = 1.0;
};

struct TaskPack {
    std::string task_id;
    std::string description;
    std::vector<Intent> intents;
    std::vector<std::string> response_corpus;  // paraphrase variants already flattened in
};

// Best fraction of any single pattern's keywords present in the tokens.
double intent_score(const TokenList& tokens, const Intent& intent);

// Highest-scoring intent that clears its threshold; ties go to the
// lexicographically smallest id. nullptr if none.
const Intent* match_intent(const TokenList& tokens, const TaskPack& pack);

// Inverse-frequency weighted term overlap between `user_tokens` and every
// corpus entry; returns the top min(k, corpus) with model ranks 0..n-1.
// Throws InvalidArgument on an empty corpus or k < 1.
std::vector<Candidate> generate_candidates(const TokenList& user_tokens, const TaskPack& pack,
                                           int k = kDefaultTopK);

// Retrieval score used by generate_candidates, exposed for diagnostics.
std::vector<double> corpus_scores(const TokenList& user_tokens, const TaskPack& pack);

const std::string& select_scripted(const Intent& intent, std::uint64_t turn_seed);

// Structural parse only (types, required fields). Throws ParseError.
TaskPack parse_pack(std::string_view json_text);

// Contract checks; empty result means the pack is valid.
std::vector<std::string> lint_pack(const TaskPack& pack);

// Parse + lint from disk. Returns the issues, including a parse failure.
std::vector<std::string> lint_pack_file(const std::filesystem::path& path);

// parse + lint; throws ParseError listing the issues.
TaskPack load_pack(const std::filesystem::path& path);

// All *.json packs in one directory, keyed by task_id. Immutable once built.
class PackRegistry {
public:
    static PackRegistry load_dir(const std::filesystem::path& dir);

    void add(TaskPack pack);
    std::shared_ptr<const TaskPack> find(const std::string& task_id) const;
    std::vector<std::string> task_ids() const;
    bool empty() const { return packs_.empty(); }

private:
    std::map<std::string, std::shared_ptr<const TaskPack>> packs_;
};

// Compiled-in location of the shipped packs; overridden by $STYLEMATCH_PACKS_DIR.
std::filesystem::path default_packs_dir();

}  // namespace stylematch
