#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "knotcubes/rational.hpp"

namespace knotcubes {

using QVec = std::vector<Scalar>;  // exact point in R^n
using DVec = std::vector<double>;  // floating point in R^n

inline DVec to_dvec(const QVec& q) {
    DVec d(q.size());
    for (size_t i = 0; i < q.size(); ++i) d[i] = to_double(q[i]);
    return d;
}

inline QVec to_qvec(const DVec& d) {
    QVec q(d.size());
    for (size_t i = 0; i < d.size(); ++i) q[i] = exact(d[i]);
    return q;
}

inline DVec dvec_sub(const DVec& a, const DVec& b) {
    DVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline DVec dvec_add(const DVec& a, const DVec& b) {
    DVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline DVec dvec_scale(const DVec& a, double s) {
    DVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

// r += s*a
inline void dvec_axpy(DVec& r, double s, const DVec& a) {
    for (size_t i = 0; i < a.size(); ++i) r[i] += s * a[i];
}

inline double dvec_dot(const DVec& a, const DVec& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dvec_norm(const DVec& a) { return std::sqrt(dvec_dot(a, a)); }

inline double dvec_dist(const DVec& a, const DVec& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

using V3 = std::array<double, 3>;

inline V3 v3(double x, double y, double z) { return {x, y, z}; }
inline V3 v3_add(const V3& a, const V3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline V3 v3_sub(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline V3 v3_scale(const V3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline double v3_dot(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline V3 v3_cross(const V3& a, const V3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double v3_norm(const V3& a) { return std::sqrt(v3_dot(a, a)); }
inline double v3_det(const V3& a, const V3& b, const V3& c) { return v3_dot(a, v3_cross(b, c)); }

} // namespace knotcubes
