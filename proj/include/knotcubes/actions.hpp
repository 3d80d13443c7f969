#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "knotcubes/operad.hpp"
#include "knotcubes/rng.hpp"
#include "knotcubes/tube.hpp"

namespace knotcubes {

// mu(L, f) = (L x Id) o f o (L^{-1} x Id); support moves into L(I^j) x D^k.
inline TubeEmbedding conjugate(const LittleCube& L, const TubeEmbedding& f) {
    return {std::make_shared<tdetail::ConjugateNode>(L, f.root)};
}

// Overlapping-cubes action: (j+1)-cubes act on embeddings of R^j x D^k.
// Each cube conjugates its tube by the projection that forgets the last
// axis, and the pieces compose with the lowest last-axis height outermost.
// With disjoint projections the order is immaterial; ties across stacked
// cubes are resolved by that height, which is what makes the extra axis do
// its job. The empty configuration yields the identity.
inline TubeEmbedding kappa_overlap(const CubeConfig& c, const std::vector<TubeEmbedding>& tubes,
                                   size_t disk_dim = 2) {
    if (c.arity() != tubes.size()) throw ValidationError("kappa_overlap: arity mismatch");
    const size_t j = c.n - 1;
    if (tubes.empty()) return identity_tube(j, disk_dim);
    const size_t k = tubes[0].disk_dim();
    for (const auto& t : tubes)
        if (t.cube_dim() != j || t.disk_dim() != k)
            throw DimensionMismatch("kappa_overlap: tubes must share cube dimension c.n - 1");

    std::vector<size_t> sig = height_permutation(c);
    auto piece = [&](size_t p) -> tdetail::NodePtr {
        if (j == 0) return tubes[p].root;
        return std::make_shared<tdetail::ConjugateNode>(cube_project(c.cubes[p]).base, tubes[p].root);
    };
    tdetail::NodePtr acc = piece(sig.back());
    for (size_t q = sig.size() - 1; q-- > 0;)
        acc = std::make_shared<tdetail::ComposeNode>(piece(sig[q]), acc);
    return {acc};
}

// Self-embedding of R^j x D^k supported in [-1,inf) x I^{j-1} x D^k, carrying
// a designated top face: for t1 >= 1 the map is (t1, rest) -> (t1, face(rest)).
struct PseudoIsotopyEmbedding {
    TubeEmbedding body;
    TubeEmbedding face;
};

namespace tdetail {

// Twist whose angle ramps from 0 (t <= -0.9) to theta (t >= 0.9) and then
// stays put: the track never untwists, so its top face is a disk rotation.
struct TwistTrackNode final : TubeNode {
    double theta;
    explicit TwistTrackNode(double th) : theta(th) {
        j = 1;
        k = 2;
        lo = {-0.9};
        hi = {std::numeric_limits<double>::infinity()};
    }
    DVec apply(const DVec& x) const override {
        double r = x[0] >= 0.9 ? 1.0 : (x[0] <= -0.9 ? 0.0 : (x[0] + 0.9) / 1.8);
        double phi = theta * r, c = std::cos(phi), s = std::sin(phi);
        return {x[0], c * x[1] - s * x[2], s * x[1] + c * x[2]};
    }
    const char* tag() const override { return "twist_track"; }
};

// Pseudo-isotopy sliding from the identity to a target embedding one cube
// dimension down: the slice at t1 interpolates linearly toward the target,
// arriving at t1 >= 0.9 and staying there.
struct TrackNode final : TubeNode {
    NodePtr target;
    explicit TrackNode(NodePtr tgt) : target(std::move(tgt)) {
        j = target->j + 1;
        k = target->k;
        lo.push_back(-0.9);
        hi.push_back(std::numeric_limits<double>::infinity());
        for (size_t i = 0; i + 1 < j; ++i) {
            lo.push_back(target->lo[i]);
            hi.push_back(target->hi[i]);
        }
    }
    DVec apply(const DVec& x) const override {
        double r = x[0] >= 0.9 ? 1.0 : (x[0] <= -0.9 ? 0.0 : (x[0] + 0.9) / 1.8);
        DVec rest(x.begin() + 1, x.end());
        DVec y = target->eval(rest);
        DVec out(x.size());
        out[0] = x[0];
        for (size_t c = 0; c < rest.size(); ++c) out[c + 1] = (1 - r) * rest[c] + r * y[c];
        return out;
    }
    const char* tag() const override { return "track"; }
};

}  // namespace tdetail

inline PseudoIsotopyEmbedding pec_identity(size_t j, size_t k) {
    if (j < 1) throw ValidationError("pec_identity: need at least one cube coordinate");
    return {identity_tube(j, k), identity_tube(j - 1, k)};
}

inline PseudoIsotopyEmbedding twist_track(double theta) {
    return {TubeEmbedding{std::make_shared<tdetail::TwistTrackNode>(theta)}, disk_rotation(theta)};
}

inline PseudoIsotopyEmbedding pec_track(const TubeEmbedding& target) {
    return {TubeEmbedding{std::make_shared<tdetail::TrackNode>(target.root)}, target};
}

inline LittleCube drop_first_factor(const LittleCube& c) {
    std::vector<AffineInc> fs(c.factors.begin() + 1, c.factors.end());
    return LittleCube(std::move(fs));
}

inline PseudoIsotopyEmbedding conjugate_pec(const LittleCube& L, const PseudoIsotopyEmbedding& p) {
    if (L.dim() != p.body.cube_dim())
        throw DimensionMismatch("conjugate_pec: cube dimension must match the embedding's");
    TubeEmbedding body{std::make_shared<tdetail::ConjugateNode>(L, p.body.root)};
    TubeEmbedding face =
        L.dim() == 1 ? p.face
                     : TubeEmbedding{std::make_shared<tdetail::ConjugateNode>(drop_first_factor(L), p.face.root)};
    return {body, face};
}

// Cube action on pseudo-isotopy embeddings: full j-cubes conjugate, and the
// pieces compose with the lowest FIRST-coordinate height outermost. The top
// faces compose in the same order under the dropped-first-factor cubes, so
// restriction commutes with the action by construction.
inline PseudoIsotopyEmbedding kappa_pec(const CubeConfig& c,
                                        const std::vector<PseudoIsotopyEmbedding>& ps,
                                        size_t disk_dim = 2) {
    if (c.arity() != ps.size()) throw ValidationError("kappa_pec: arity mismatch");
    const size_t j = c.n;
    if (ps.empty()) return pec_identity(j, disk_dim);
    const size_t k = ps[0].body.disk_dim();
    for (const auto& p : ps)
        if (p.body.cube_dim() != j || p.body.disk_dim() != k || p.face.cube_dim() + 1 != j ||
            p.face.disk_dim() != k)
            throw DimensionMismatch("kappa_pec: embedding dimensions must match the configuration");

    std::vector<size_t> sig = height_permutation(c, 0);
    std::vector<PseudoIsotopyEmbedding> parts;
    parts.reserve(ps.size());
    for (size_t p = 0; p < ps.size(); ++p) parts.push_back(conjugate_pec(c.cubes[p], ps[p]));

    PseudoIsotopyEmbedding acc = parts[sig.back()];
    for (size_t q = sig.size() - 1; q-- > 0;) {
        const auto& left = parts[sig[q]];
        acc = {compose_tubes(left.body, acc.body), compose_tubes(left.face, acc.face)};
    }
    return acc;
}

// Return the designated top face, after spot-checking that the body really
// settles into (t1, rest) -> (t1, face(rest)) at the top of its track.
inline TubeEmbedding restrict_face(const PseudoIsotopyEmbedding& p) {
    const size_t j = p.body.cube_dim(), k = p.body.disk_dim();
    if (j < 1 || p.face.cube_dim() + 1 != j || p.face.disk_dim() != k)
        throw DimensionMismatch("restrict_face: face must be one cube dimension below the body");
    Rng rng(0x7face5u);
    for (int s = 0; s < 32; ++s) {
        DVec rest(j - 1 + k);
        for (size_t c = 0; c + 1 < j; ++c) rest[c] = rng.uniform(-1.0, 1.0);
        DVec ball = rng.in_ball(k);
        for (size_t c = 0; c < k; ++c) rest[j - 1 + c] = ball[c];

        DVec x(j + k);
        x[0] = 1.0;
        for (size_t c = 0; c + 1 < j + k; ++c) x[c + 1] = rest[c];
        DVec via_body = eval_tube(p.body, x);
        DVec via_face = eval_tube(p.face, rest);
        double err = std::abs(via_body[0] - 1.0);
        for (size_t c = 0; c + 1 < j + k; ++c)
            err = std::max(err, std::abs(via_body[c + 1] - via_face[c]));
        if (err > 1e-9)
            throw ValidationError("restrict_face: designated face disagrees with the embedding at the top face");
    }
    return p.face;
}

}  // namespace knotcubes
