#include "biflip/wordreduce.hpp"

#include <cmath>
#include <optional>

namespace biflip {

std::string_view to_string(RewriteKind kind) {
    switch (kind) {
    case RewriteKind::Involution: return "involution";
    case RewriteKind::PencilParallel: return "pencil-parallel";
    case RewriteKind::PencilConcurrent: return "pencil-concurrent";
    }
    return "?";
}

namespace {

constexpr double far_away = 1e12;

void require_lines(const ReflectionWord& word) {
    for (const Flipper& f : word) {
        if (f.space != Space::E2 || f.kind != FlipperKind::Line)
            fail(ErrorCode::WrongFlipperKind, "words are made of lines of E2");
    }
}

// Intersection point of two lines, or none when they are parallel.
std::optional<Vec> meet(const Flipper& l, const Flipper& m) {
    const Vec n1 = normal(l), n2 = normal(m);
    Mat a(2, 2);
    a << n1.transpose(), n2.transpose();
    if (std::abs(a.determinant()) < 1e-14) return std::nullopt;
    Vec rhs(2);
    rhs << n1.dot(l.anchor), n2.dot(m.anchor);
    const Vec x = a.partialPivLu().solve(rhs);
    if (!x.allFinite() || x.norm() >= far_away) return std::nullopt;
    return x;
}

struct PencilOf {
    std::optional<Vec> center;   // concurrent pencil
    Vec dir;                     // parallel pencil
};

PencilOf pencil_of(const Flipper& l, const Flipper& m) {
    if (auto p = meet(l, m)) return {p, Vec()};
    return {std::nullopt, direction(l)};
}

RewriteKind kind_of(const PencilOf& p) {
    return p.center ? RewriteKind::PencilConcurrent : RewriteKind::PencilParallel;
}

Flipper line_through(const Vec& p, const Vec& dir) { return line_flipper(Space::E2, p, dir); }

// (l, m) -> (l', target) with F_l o F_m = F_l' o F_target.
Flipper partner_before(const Flipper& l, const Flipper& m, const Flipper& target) {
    return flipper_of_involution(flip_of(l) * flip_of(m) * flip_of(target), 1e-7);
}

// (l, m) -> (target, m') with F_l o F_m = F_target o F_m'.
Flipper partner_after(const Flipper& l, const Flipper& m, const Flipper& target) {
    return flipper_of_involution(flip_of(target) * flip_of(l) * flip_of(m), 1e-7);
}

class Reducer {
public:
    explicit Reducer(ReflectionWord word) : word_(std::move(word)) {}

    Reduction run() {
        while (true) {
            if (cancel_once()) continue;
            if (word_.size() <= 2) break;
            if (word_.size() == 3) {
                merge_three();
                break;
            }
            shorten_window(0);
        }
        return {word_, steps_};
    }

private:
    ReflectionWord word_;
    std::vector<RewriteStep> steps_;

    void record(RewriteKind kind, std::size_t pos, std::vector<Flipper> replacement) {
        RewriteStep step;
        step.kind = kind;
        step.position = pos;
        step.replaced.assign(word_.begin() + static_cast<std::ptrdiff_t>(pos),
                             word_.begin() + static_cast<std::ptrdiff_t>(pos + 2));
        step.replacement = std::move(replacement);
        word_ = apply_step(word_, step);
        steps_.push_back(std::move(step));
    }

    bool cancel_once() {
        for (std::size_t i = 0; i + 1 < word_.size(); ++i) {
            if (same_flipper(word_[i], word_[i + 1])) {
                record(RewriteKind::Involution, i, {});
                return true;
            }
        }
        return false;
    }

    // Rewrites the pair at pos so that its right letter becomes `target`.
    void set_right(std::size_t pos, const Flipper& target) {
        if (same_flipper(word_[pos + 1], target)) return;
        const PencilOf p = pencil_of(word_[pos], word_[pos + 1]);
        record(kind_of(p), pos, {partner_before(word_[pos], word_[pos + 1], target), target});
    }

    void set_left(std::size_t pos, const Flipper& target) {
        if (same_flipper(word_[pos], target)) return;
        const PencilOf p = pencil_of(word_[pos], word_[pos + 1]);
        record(kind_of(p), pos, {target, partner_after(word_[pos], word_[pos + 1], target)});
    }

    // Three letters in one pencil collapse to one.
    void merge_three() {
        if (!in_one_pencil({word_[0], word_[1], word_[2]})) return;
        set_right(0, word_[2]);
        cancel_once();
    }

    // Four letters at pos become two.
    void shorten_window(std::size_t pos) {
        PencilOf left = pencil_of(word_[pos], word_[pos + 1]);
        PencilOf right = pencil_of(word_[pos + 2], word_[pos + 3]);
        if (!left.center && !right.center && std::abs(left.dir(0) * right.dir(1) - left.dir(1) * right.dir(0)) > 1e-12) {
            // Two parallel pencils in different directions: turn the middle
            // pair by a right angle about its meeting point.
            const Flipper& b = word_[pos + 1];
            const Vec x = *meet(b, word_[pos + 2]);
            const Vec u = direction(b);
            Vec turned(2);
            turned << -u(1), u(0);
            set_left(pos + 1, line_through(x, turned));
            left = pencil_of(word_[pos], word_[pos + 1]);
            right = pencil_of(word_[pos + 2], word_[pos + 3]);
        }
        Flipper common;
        if (left.center && right.center) {
            const Vec p = *left.center, q = *right.center;
            common = (q - p).norm() > 1e-9 ? line_through(p, Vec(q - p)) : word_[pos + 2];
        } else if (left.center) {
            common = line_through(*left.center, right.dir);
        } else if (right.center) {
            common = line_through(*right.center, left.dir);
        } else {
            common = word_[pos + 2];
        }
        set_right(pos, common);
        set_left(pos + 2, common);
        cancel_once();
    }
};

} // namespace

Isometry encode_word(const ReflectionWord& word) {
    require_lines(word);
    Isometry t = Isometry::identity(Space::E2);
    for (const Flipper& f : word) t = t * flip_of(f);
    return t;
}

Reduction reduce(const ReflectionWord& word) {
    require_lines(word);
    return Reducer(word).run();
}

bool is_identity(const ReflectionWord& word) { return reduce(word).word.empty(); }

ReflectionWord apply_step(const ReflectionWord& word, const RewriteStep& step) {
    if (step.position + step.replaced.size() > word.size())
        fail(ErrorCode::MalformedInput, "rewrite step runs past the end of the word");
    ReflectionWord out(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(step.position));
    out.insert(out.end(), step.replacement.begin(), step.replacement.end());
    out.insert(out.end(), word.begin() + static_cast<std::ptrdiff_t>(step.position + step.replaced.size()), word.end());
    return out;
}

ReflectionWord replay(const ReflectionWord& word, const std::vector<RewriteStep>& steps) {
    ReflectionWord w = word;
    for (const RewriteStep& s : steps) w = apply_step(w, s);
    return w;
}

std::pair<Flipper, Flipper> point_as_lines(const Vec& p) {
    Vec e1(2), e2(2);
    e1 << 1.0, 0.0;
    e2 << 0.0, 1.0;
    return {line_flipper(Space::E2, p, e1), line_flipper(Space::E2, p, e2)};
}

bool in_one_pencil(const std::vector<Flipper>& lines, double eps) {
    if (lines.size() < 2) return true;
    std::optional<Vec> center;
    for (std::size_t i = 0; i < lines.size() && !center; ++i) {
        for (std::size_t j = i + 1; j < lines.size() && !center; ++j) center = meet(lines[i], lines[j]);
    }
    if (center) {
        for (const Flipper& l : lines) {
            if (std::abs(normal(l).dot(*center - l.anchor)) > eps * std::max(1.0, center->norm())) return false;
        }
        return true;
    }
    return true;   // pairwise parallel
}

} // namespace biflip
