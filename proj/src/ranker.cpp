#include "stylematch/ranker.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "stylematch/error.h"

namespace stylematch {

void validate(const StyleWeights& w) {
    for (double v : {w.w_pronoun, w.w_rep_rate, w.w_rep_sent, w.w_len}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("style weights must be finite and non-negative");
    }
    if (!(w.len_scale > 0.0) || !std::isfinite(w.len_scale)) throw InvalidArgument("len_scale must be positive");
}

double content_distance(const StyleVector& candidate, const StyleVector& user, const StyleWeights& w) {
    return w.w_pronoun * std::abs(candidate.pronoun_ratio - user.pronoun_ratio) +
           w.w_rep_rate * std::abs(candidate.term_rep_rate - user.term_rep_rate) +
           w.w_rep_sent * std::abs(candidate.rep_sentence_ratio - user.rep_sentence_ratio) +
           w.w_len * std::abs(candidate.utterance_len_words - user.utterance_len_words) / w.len_scale;
}

std::vector<Candidate> rerank(std::vector<Candidate> candidates, const StyleVector& user_style,
                              const StyleWeights& w) {
    if (candidates.empty()) throw InvalidArgument("rerank needs at least one candidate");
    validate(w);
    std::set<int> ranks;
    for (auto& c : candidates) {
        if (!ranks.insert(c.model_rank).second) {
            throw InvalidArgument("duplicate model_rank " + std::to_string(c.model_rank));
        }
        c.distance = content_distance(c.style, user_style, w);
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.model_rank < b.model_rank;
    });
    return candidates;
}

}  // namespace stylematch
