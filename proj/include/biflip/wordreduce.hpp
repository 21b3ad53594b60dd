#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "biflip/flips.hpp"

namespace biflip {

// Line flippers of E2; the rightmost letter is applied first.
using ReflectionWord = std::vector<Flipper>;

enum class RewriteKind { Involution, PencilParallel, PencilConcurrent };
std::string_view to_string(RewriteKind kind);

// letters[position, position + replaced.size()) become `replacement`.
struct RewriteStep {
    RewriteKind kind = RewriteKind::Involution;
    std::size_t position = 0;
    std::vector<Flipper> replaced;
    std::vector<Flipper> replacement;
};

struct Reduction {
    ReflectionWord word;
    std::vector<RewriteStep> steps;
};

Isometry encode_word(const ReflectionWord& word);   // identity of E2 for the empty word

// Even words end with at most two letters. Odd words end with one letter
// when they encode a reflection and three when they encode a glide.
Reduction reduce(const ReflectionWord& word);
bool is_identity(const ReflectionWord& word);

ReflectionWord apply_step(const ReflectionWord& word, const RewriteStep& step);
ReflectionWord replay(const ReflectionWord& word, const std::vector<RewriteStep>& steps);

// Two perpendicular lines through p; their flips compose to the point flip.
std::pair<Flipper, Flipper> point_as_lines(const Vec& p);

bool in_one_pencil(const std::vector<Flipper>& lines, double eps = 1e-8);

} // namespace biflip
