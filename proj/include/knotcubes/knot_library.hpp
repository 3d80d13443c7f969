#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "knotcubes/knot.hpp"
#include "knotcubes/knot_ops.hpp"

namespace knotcubes {

namespace detail {

// Library knots keep their vertices inside |t| <= 9/10 so that tube models
// have a standard margin before the tails take over.
inline std::vector<Scalar> even_params(size_t count) {
    std::vector<Scalar> ts(count);
    for (size_t k = 0; k < count; ++k)
        ts[k] = rat(-9, 10) + rat(9, 5) * Scalar(k) / Scalar(count - 1);
    return ts;
}

// Two-strand braid picture with three crossings, traversed twice via a return
// arc over the top. Gauss sequence O1 U2 O3 U1 O2 U3; all crossings share one
// sign, so this is a trefoil (the bracket oracle pins the handedness).
inline LongKnotPL braid_trefoil_raw() {
    auto q = [](long num, long den) { return rat(num, den); };
    std::vector<QVec> pts = {
        {q(-9, 10), q(0, 1), q(0, 1)},
        {q(-9, 20), q(-3, 10), q(0, 1)},
        {q(-3, 10), q(0, 1), q(3, 20)},    // crossing 1, over
        {q(-3, 20), q(3, 10), q(0, 1)},
        {q(0, 1), q(0, 1), q(-3, 20)},     // crossing 2, under
        {q(3, 20), q(-3, 10), q(0, 1)},
        {q(3, 10), q(0, 1), q(3, 20)},     // crossing 3, over
        {q(9, 20), q(3, 10), q(0, 1)},
        {q(3, 5), q(11, 20), q(0, 1)},
        {q(-3, 5), q(11, 20), q(0, 1)},
        {q(-9, 20), q(3, 10), q(0, 1)},
        {q(-3, 10), q(0, 1), q(-3, 20)},   // crossing 1, under
        {q(-3, 20), q(-3, 10), q(0, 1)},
        {q(0, 1), q(0, 1), q(3, 20)},      // crossing 2, over
        {q(3, 20), q(3, 10), q(0, 1)},
        {q(3, 10), q(0, 1), q(-3, 20)},    // crossing 3, under
        {q(9, 20), q(-3, 10), q(0, 1)},
        {q(3, 5), q(-9, 20), q(0, 1)},
        {q(9, 10), q(0, 1), q(0, 1)},
    };
    const size_t count = pts.size();
    return make_knot(3, even_params(count), std::move(pts));
}

// Cut a sampled closed curve at its unique max-x arc and route the two ends
// out to the axis tails; the detour passes above everything else.
inline LongKnotPL longify_closed_curve(const std::vector<DVec>& samples, double eps,
                                       std::uint64_t seed) {
    const size_t N = samples.size();
    std::vector<DVec> v;
    v.push_back({-0.9, 0.0, 0.0});
    double y0 = samples[0][1], z0 = samples[0][2];
    v.push_back({-0.82, 0.58, z0});
    v.push_back({0.85, 0.58, z0});
    v.push_back({0.85, y0, z0});
    for (const auto& s : samples) v.push_back(s);
    v.push_back({0.85, samples[N - 1][1], samples[N - 1][2]});
    v.push_back({0.9, 0.0, 0.0});

    std::vector<QVec> pts;
    pts.reserve(v.size());
    for (const auto& p : v) pts.push_back({exact(p[0]), exact(p[1]), exact(p[2])});
    pts.front() = {rat(-9, 10), Scalar(0), Scalar(0)};
    pts.back() = {rat(9, 10), Scalar(0), Scalar(0)};
    const size_t count = pts.size();
    LongKnotPL raw = make_knot(3, even_params(count), std::move(pts));
    if (!validate_embedded_exact(raw))
        throw ValidationError("longify_closed_curve: assembled polyline self-intersects");
    double r = reach_estimate(raw);
    return perturb(raw, std::min(eps, r / 12.0), seed);
}

// Classic figure-eight space curve, sampled off-phase so the max-x point at
// angle zero falls inside the cut edge.
inline LongKnotPL figure_eight_built() {
    const size_t N = 60;
    const double pi = 3.14159265358979323846;
    std::vector<DVec> raw(N);
    double ymax = 0;
    for (size_t i = 0; i < N; ++i) {
        double th = (2.0 * double(i) + 1.0) * pi / double(N);
        raw[i] = {(2 + std::cos(2 * th)) * std::cos(3 * th),
                  (2 + std::cos(2 * th)) * std::sin(3 * th), std::sin(4 * th)};
        ymax = std::max(ymax, std::abs(raw[i][1]));
    }
    double sx = 0.72 / 3.0, sy = 0.45 / ymax, sz = 0.18;
    for (auto& p : raw) {
        p[0] *= sx;
        p[1] *= sy;
        p[2] *= sz;
    }
    return longify_closed_curve(raw, 0.006, 0x8f1e33u);
}

inline LongKnotPL trefoil_built(bool right) {
    LongKnotPL raw = braid_trefoil_raw();  // left-handed as drawn
    if (right) raw = mirror_knot(raw, 2);
    double r = reach_estimate(raw);
    return perturb(raw, std::min(0.006, r / 12.0), right ? 0x51c6d2u : 0x9a40b7u);
}

inline ImmersedKnotPL immersed_trefoil_built() {
    LongKnotPL raw = braid_trefoil_raw();
    raw.points[4] = {Scalar(0), Scalar(0), Scalar(0)};
    raw.points[13] = {Scalar(0), Scalar(0), Scalar(0)};
    raw.points[6] = {rat(3, 10), Scalar(0), Scalar(0)};
    raw.points[15] = {rat(3, 10), Scalar(0), Scalar(0)};
    raw.finalize();
    ImmersedKnotPL im;
    im.curve = raw;
    im.double_points = {{raw.ts[4], raw.ts[13]}, {raw.ts[6], raw.ts[15]}};
    validate_immersed(im);
    return im;
}

} // namespace detail

// Embedded library knots by name. "trefoil" is the right-handed one.
inline const LongKnotPL& standard_knot(const std::string& name) {
    static const std::map<std::string, LongKnotPL> lib = [] {
        std::map<std::string, LongKnotPL> m;
        m["unknot"] = straight_knot(3);
        m["trefoil"] = detail::trefoil_built(true);
        m["trefoil_left"] = detail::trefoil_built(false);
        m["figure_eight"] = detail::figure_eight_built();
        m["granny"] = connect_sum(m["trefoil"], m["trefoil"]);
        m["square"] = connect_sum(m["trefoil"], m["trefoil_left"]);
        return m;
    }();
    auto it = lib.find(name);
    if (it == lib.end()) throw ValidationError("standard_knot: unknown name '" + name + "'");
    return it->second;
}

inline std::vector<std::string> standard_knot_names() {
    return {"unknot", "trefoil", "trefoil_left", "figure_eight", "granny", "square"};
}

// Two exact transverse double points; the (-z,+z) resolution restores the
// left-handed braid picture.
inline const ImmersedKnotPL& immersed_trefoil() {
    static const ImmersedKnotPL k = detail::immersed_trefoil_built();
    return k;
}

// Fixed ten-knot corpus used by the acceptance checks.
inline const std::vector<std::pair<std::string, LongKnotPL>>& knot_corpus() {
    static const std::vector<std::pair<std::string, LongKnotPL>> corpus = [] {
        std::vector<std::pair<std::string, LongKnotPL>> c;
        for (const auto& name : standard_knot_names()) c.emplace_back(name, standard_knot(name));
        c.emplace_back("trefoil+figure_eight",
                       connect_sum(standard_knot("trefoil"), standard_knot("figure_eight")));
        c.emplace_back("figure_eight+figure_eight",
                       connect_sum(standard_knot("figure_eight"), standard_knot("figure_eight")));
        {
            const LongKnotPL& g = standard_knot("granny");
            c.emplace_back("granny_wiggled", perturb(g, reach_estimate(g) / 15.0, 7031));
        }
        {
            const LongKnotPL& f8 = standard_knot("figure_eight");
            c.emplace_back("figure_eight_wiggled", perturb(f8, reach_estimate(f8) / 15.0, 9907));
        }
        return c;
    }();
    return corpus;
}

} // namespace knotcubes
