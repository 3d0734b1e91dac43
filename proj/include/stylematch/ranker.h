#pragma once

#include <string>
#include <vector>

#include "stylematch/style_state.h"

namespace stylematch {

struct StyleWeights {
    double w_pronoun = 1.0;
    double w_rep_rate = 1.0;
    double w_rep_sent = 1.0;
    double w_len = 1.0;
    double len_scale = 20.0;  // words

    bool operator==(const StyleWeights&) const = default;
};

// Throws InvalidArgument unless weights are non-negative and len_scale > 0.
// Setting every weight to zero is accepted: rerank then falls back to
// generator order.
void validate(const StyleWeights& w);

struct Candidate {
    std::string text;
    int model_rank = 0;
    StyleVector style;  // content fields only
    double distance = 0.0;
};

// Weighted L1 over the content fields; acoustic fields are ignored.
double content_distance(const StyleVector& candidate, const StyleVector& user, const StyleWeights& w);

// Sorted by ascending distance, ties by ascending model_rank. Throws
// InvalidArgument on empty input or duplicate model ranks.
std::vector<Candidate> rerank(std::vector<Candidate> candidates, const StyleVector& user_style,
                              const StyleWeights& w);

}  // namespace stylematch
