#include "biflip/batch.hpp"

#include <limits>

#include <omp.h>

namespace biflip {

namespace {

template <class In, class Out, class Fn>
std::vector<Out> map_all(const std::vector<In>& items, Exec exec, Fn fn) {
    std::vector<Out> out(items.size());
    const auto n = static_cast<std::ptrdiff_t>(items.size());
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = fn(items[i]);
        return out;
    }
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = fn(items[i]);
    return out;
}

double pair_error(const std::pair<Biflipper, Biflipper>& p, Mode mode) {
    try {
        const Isometry target = encode(p.second) * encode(p.first);
        const H2TResult r = head_to_tail(p.first, p.second, mode);
        return distance(encode(r.biflipper), target, target.space == Space::RP2) / std::max(1.0, max_abs(target.matrix));
    } catch (const GeometryError&) {
        return std::numeric_limits<double>::infinity();
    }
}

} // namespace

std::vector<Isometry> encode_all(const std::vector<Biflipper>& items, Exec exec) {
    return map_all<Biflipper, Isometry>(items, exec, [](const Biflipper& b) { return encode(b); });
}

std::vector<std::optional<IsometryClass>> classify_all(const std::vector<Isometry>& items, Exec exec) {
    return map_all<Isometry, std::optional<IsometryClass>>(items, exec, [](const Isometry& t) -> std::optional<IsometryClass> {
        try {
            return classify(t);
        } catch (const GeometryError&) {
            return std::nullopt;
        }
    });
}

std::vector<std::optional<Biflipper>> decompose_all(const std::vector<Isometry>& items, Exec exec) {
    return map_all<Isometry, std::optional<Biflipper>>(items, exec, [](const Isometry& t) -> std::optional<Biflipper> {
        try {
            return decompose(t);
        } catch (const GeometryError&) {
            return std::nullopt;
        }
    });
}

std::vector<double> head_to_tail_errors(const std::vector<std::pair<Biflipper, Biflipper>>& pairs, Mode mode, Exec exec) {
    return map_all<std::pair<Biflipper, Biflipper>, double>(
        pairs, exec, [mode](const std::pair<Biflipper, Biflipper>& p) { return pair_error(p, mode); });
}

int worker_count() { return omp_get_max_threads(); }

} // namespace biflip
