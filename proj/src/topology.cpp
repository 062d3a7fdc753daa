#include "knotsec/topology.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>

namespace knotsec {

namespace {

// ---------------------------------------------------------------------------
// finite-group machinery: each certificate group carries its own element
// list, multiplication/inverse tables and candidate meridian classes.
// Registry order: S3, D4, D5, S4, A5, S5, then dihedral D6..D10.
// ---------------------------------------------------------------------------
struct FGroup {
    std::string name;
    uint16_t identity = 0;
    std::vector<std::vector<uint16_t>> mul;  // (a*b)(x) = a(b(x))
    std::vector<uint16_t> inv;
    // non-identity conjugacy classes whose span is non-abelian (meridians all
    // map into one class; abelian spans can never certify a zero-sum word)
    std::vector<std::vector<uint16_t>> classes;
    // dihedral reflection lookup: refl[a] = element id of the reflection
    // x -> a - x (empty for non-dihedral groups)
    std::vector<uint16_t> refl;
    int order() const { return static_cast<int>(inv.size()); }
};

void finish_group(FGroup& g) {
    int N = static_cast<int>(g.mul.size());
    // inverse table from mul
    g.inv.assign(N, 0);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            if (g.mul[a][b] == g.identity) {
                g.inv[a] = static_cast<uint16_t>(b);
                break;
            }
    // conjugacy classes, filtered to non-abelian spans
    std::vector<char> seen(N, 0);
    seen[g.identity] = 1;
    for (int c = 0; c < N; ++c) {
        if (seen[c]) continue;
        std::set<uint16_t> cls;
        for (int h = 0; h < N; ++h)
            cls.insert(g.mul[g.mul[h][c]][g.inv[h]]);
        for (auto x : cls) seen[x] = 1;
        bool noncomm = false;
        for (auto x : cls) {
            for (auto y : cls)
                if (g.mul[x][y] != g.mul[y][x]) {
                    noncomm = true;
                    break;
                }
            if (noncomm) break;
        }
        if (noncomm) g.classes.emplace_back(cls.begin(), cls.end());
    }
}

// subgroups of S5, elements as permutations of {0..4}
FGroup s5_subgroup(const std::string& name,
                   const std::function<bool(const std::array<uint8_t, 5>&)>& keep) {
    using P = std::array<uint8_t, 5>;
    std::vector<P> elems;
    P p{0, 1, 2, 3, 4};
    do {
        if (keep(p)) elems.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::map<P, uint16_t> idx;
    for (size_t i = 0; i < elems.size(); ++i)
        idx[elems[i]] = static_cast<uint16_t>(i);
    FGroup g;
    g.name = name;
    g.identity = idx.at(P{0, 1, 2, 3, 4});
    int N = static_cast<int>(elems.size());
    g.mul.assign(N, std::vector<uint16_t>(N, 0));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            P c;
            for (int x = 0; x < 5; ++x) c[x] = elems[a][elems[b][x]];
            g.mul[a][b] = idx.at(c);
        }
    finish_group(g);
    // reflection lookup when this is dihedral D_n acting as x -> (a-x) mod n
    return g;
}

bool perm_even(const std::array<uint8_t, 5>& q) {
    int invs = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) invs += q[i] > q[j];
    return invs % 2 == 0;
}

// dihedral D_n with elements encoded as id = s*n + k: rotation t_k for s=0,
// reflection f_k : x -> k - x for s=1
FGroup dihedral(int n) {
    FGroup g;
    g.name = "D" + std::to_string(n);
    g.identity = 0;
    int N = 2 * n;
    g.mul.assign(N, std::vector<uint16_t>(N, 0));
    auto id_of = [&](int s, int k) {
        return static_cast<uint16_t>(s * n + ((k % n) + n) % n);
    };
    for (int sa = 0; sa < 2; ++sa)
        for (int ka = 0; ka < n; ++ka)
            for (int sb = 0; sb < 2; ++sb)
                for (int kb = 0; kb < n; ++kb) {
                    // (a∘b)(x): t_k(x)=x+k, f_k(x)=k-x
                    int s, k;
                    if (!sa && !sb) { s = 0; k = ka + kb; }
                    else if (!sa && sb) { s = 1; k = ka + kb; }
                    else if (sa && !sb) { s = 1; k = ka - kb; }
                    else { s = 0; k = ka - kb; }
                    g.mul[id_of(sa, ka)][id_of(sb, kb)] = id_of(s, k);
                }
    finish_group(g);
    g.refl.resize(n);
    for (int a = 0; a < n; ++a) g.refl[a] = id_of(1, a);
    return g;
}

struct Registry {
    std::vector<FGroup> groups;
    Registry() {
        using P = std::array<uint8_t, 5>;
        groups.push_back(s5_subgroup(
            "S3", [](const P& q) { return q[3] == 3 && q[4] == 4; }));
        // S3 = D3 acting on {0,1,2}: reflection x -> (a-x) mod 3
        {
            FGroup& s3 = groups.back();
            using Q = std::array<uint8_t, 5>;
            std::vector<Q> elems;
            Q p{0, 1, 2, 3, 4};
            std::vector<Q> all;
            do {
                if (p[3] == 3 && p[4] == 4) all.push_back(p);
            } while (std::next_permutation(p.begin(), p.end()));
            s3.refl.resize(3);
            for (int a = 0; a < 3; ++a) {
                Q r{0, 1, 2, 3, 4};
                for (int x = 0; x < 3; ++x)
                    r[x] = static_cast<uint8_t>(((a - x) % 3 + 3) % 3);
                for (size_t i = 0; i < all.size(); ++i)
                    if (all[i] == r) s3.refl[a] = static_cast<uint16_t>(i);
            }
        }
        groups.push_back(dihedral(4));
        groups.push_back(dihedral(5));
        groups.push_back(s5_subgroup("S4", [](const P& q) { return q[4] == 4; }));
        groups.push_back(s5_subgroup("A5", [](const P& q) { return perm_even(q); }));
        groups.push_back(s5_subgroup("S5", [](const P&) { return true; }));
        for (int n = 6; n <= 10; ++n) groups.push_back(dihedral(n));
    }
    const FGroup* by_name(const std::string& n) const {
        for (const auto& g : groups)
            if (g.name == n) return &g;
        return nullptr;
    }
};

const Registry& registry() {
    static const Registry r;
    return r;
}

// ---------------------------------------------------------------------------
// projections and diagrams
// ---------------------------------------------------------------------------
struct Basis {
    Vec3 u, v, w;  // orthonormal; project to (u,v), depth along w
};

Basis basis_from_dir(const Vec3& d) {
    Vec3 w = d.normalized();
    Vec3 pick = std::abs(w.x) < 0.8 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 u = pick.cross(w).normalized();
    Vec3 v = w.cross(u);
    return {u, v, w};
}

Vec3 seeded_dir(uint64_t seed, int attempt) {
    std::mt19937_64 rng(seed * 1000003ull + 7919ull * attempt + 1ull);
    std::normal_distribution<double> N(0.0, 1.0);
    for (;;) {
        Vec3 d{N(rng), N(rng), N(rng)};
        if (d.norm() > 1e-3) return d.normalized();
    }
}

struct P2 {
    double x, y, z;  // projected coords + depth
};

std::vector<P2> project(const std::vector<Point3>& V, const Basis& B) {
    std::vector<P2> out(V.size());
    for (size_t i = 0; i < V.size(); ++i)
        out[i] = {V[i].dot(B.u), V[i].dot(B.v), V[i].dot(B.w)};
    return out;
}

double scale2d(const std::vector<P2>& P) {
    double lx = 1e300, ly = 1e300, hx = -1e300, hy = -1e300;
    for (const auto& p : P) {
        lx = std::min(lx, p.x);
        hx = std::max(hx, p.x);
        ly = std::min(ly, p.y);
        hy = std::max(hy, p.y);
    }
    return std::max(std::hypot(hx - lx, hy - ly), 1e-12);
}

constexpr double EPS_PARAM = 1e-6;   // crossing distance from segment ends
constexpr double EPS_NEAR = 1e-6;    // 2D proximity guard, relative to scale
constexpr double EPS_DEPTH = 1e-7;   // over/under separation, relative

double pt_seg_dist2d(double px, double py, const P2& a, const P2& b) {
    double ux = b.x - a.x, uy = b.y - a.y;
    double L2 = ux * ux + uy * uy;
    double t = L2 > 0 ? std::clamp(((px - a.x) * ux + (py - a.y) * uy) / L2, 0.0, 1.0)
                      : 0.0;
    return std::hypot(px - (a.x + t * ux), py - (a.y + t * uy));
}

double seg_seg_dist2d(const P2& a0, const P2& a1, const P2& b0, const P2& b1) {
    return std::min(std::min(pt_seg_dist2d(a0.x, a0.y, b0, b1),
                             pt_seg_dist2d(a1.x, a1.y, b0, b1)),
                    std::min(pt_seg_dist2d(b0.x, b0.y, a0, a1),
                             pt_seg_dist2d(b1.x, b1.y, a0, a1)));
}

// strict interior 2D segment intersection with genericity margins
struct Hit2D {
    double s, t;    // params on the two segments
    double x, y;    // 2D point
};
enum class Cross2D { None, Hit, Ambiguous };

// Ambiguous = near-parallel segments closer than close_tol (a crossing could
// be missed or double-counted: the whole projection must be rejected)
Cross2D cross2d(const P2& a0, const P2& a1, const P2& b0, const P2& b1,
                double close_tol, Hit2D& h) {
    double ux = a1.x - a0.x, uy = a1.y - a0.y;
    double wx = b1.x - b0.x, wy = b1.y - b0.y;
    double den = ux * wy - uy * wx;
    double mag = std::max(std::hypot(ux, uy) * std::hypot(wx, wy), 1e-300);
    if (std::abs(den) < 1e-7 * mag) {
        return seg_seg_dist2d(a0, a1, b0, b1) < close_tol ? Cross2D::Ambiguous
                                                          : Cross2D::None;
    }
    double rx = b0.x - a0.x, ry = b0.y - a0.y;
    double s = (rx * wy - ry * wx) / den;
    double t = (rx * uy - ry * ux) / den;
    if (s <= 0.0 || s >= 1.0 || t <= 0.0 || t >= 1.0) return Cross2D::None;
    h = Hit2D{s, t, a0.x + s * ux, a0.y + s * uy};
    return Cross2D::Hit;
}

struct Crossing {
    int e_over, e_under;
    double s_over, s_under;
    int sign;        // orientation sign, +z toward the viewer
    double x, y;
};

// self-diagram of one closed polyline; nullopt when the projection violates a
// genericity guard
struct SelfDiagram {
    Basis B;
    std::vector<P2> P;
    std::vector<Crossing> crossings;
    double scale = 1;
};

std::optional<SelfDiagram> self_diagram(const std::vector<Point3>& V,
                                        const Basis& B) {
    int n = static_cast<int>(V.size());
    SelfDiagram D;
    D.B = B;
    D.P = project(V, B);
    D.scale = scale2d(D.P);
    const auto& P = D.P;
    auto pp = [&](int i) -> const P2& { return P[i % n]; };
    // fold-back cusp guard at vertices
    for (int i = 0; i < n; ++i) {
        double ux = pp(i + 1).x - pp(i).x, uy = pp(i + 1).y - pp(i).y;
        double wx = pp(i + 2).x - pp(i + 1).x, wy = pp(i + 2).y - pp(i + 1).y;
        double cr = ux * wy - uy * wx, dt = ux * wx + uy * wy;
        double mag = std::max(std::hypot(ux, uy) * std::hypot(wx, wy), 1e-300);
        if (std::abs(cr) < 1e-9 * mag && dt < 0) return std::nullopt;
    }
    // vertex-vs-nonincident-edge proximity guard
    for (int i = 0; i < n; ++i)
        for (int e = 0; e < n; ++e) {
            if (e == i || (e + 1) % n == i) continue;
            if (pt_seg_dist2d(P[i].x, P[i].y, pp(e), pp(e + 1)) <
                EPS_NEAR * D.scale)
                return std::nullopt;
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            Hit2D h;
            auto st = cross2d(pp(i), pp(i + 1), pp(j), pp(j + 1),
                              EPS_NEAR * D.scale, h);
            if (st == Cross2D::Ambiguous) return std::nullopt;
            if (st == Cross2D::None) continue;
            if (h.s < EPS_PARAM || h.s > 1 - EPS_PARAM || h.t < EPS_PARAM ||
                h.t > 1 - EPS_PARAM)
                return std::nullopt;
            double zi = P[i].z + h.s * (pp(i + 1).z - P[i].z);
            double zj = P[j].z + h.t * (pp(j + 1).z - P[j].z);
            if (std::abs(zi - zj) < EPS_DEPTH * D.scale) return std::nullopt;
            Crossing c;
            double uix = pp(i + 1).x - P[i].x, uiy = pp(i + 1).y - P[i].y;
            double ujx = pp(j + 1).x - P[j].x, ujy = pp(j + 1).y - P[j].y;
            if (zi > zj) {  // i over j (depth toward viewer = +w)
                c = {i, j, h.s, h.t, 0, h.x, h.y};
                c.sign = (uix * ujy - uiy * ujx) > 0 ? +1 : -1;
            } else {
                c = {j, i, h.t, h.s, 0, h.x, h.y};
                c.sign = (ujx * uiy - ujy * uix) > 0 ? +1 : -1;
            }
            D.crossings.push_back(c);
        }
    // triple-point guard
    for (size_t a = 0; a < D.crossings.size(); ++a)
        for (size_t b = a + 1; b < D.crossings.size(); ++b)
            if (std::hypot(D.crossings[a].x - D.crossings[b].x,
                           D.crossings[a].y - D.crossings[b].y) <
                EPS_NEAR * D.scale)
                return std::nullopt;
    return D;
}

// arcs of a self-diagram: under-events in knot order split the loop into arcs;
// arc k ends at under-event k
struct ArcStructure {
    struct Event {
        int edge;
        double s;
        int crossing;
    };
    std::vector<Event> events;  // sorted by (edge, s)

    int m() const { return static_cast<int>(events.size()); }
    // arc index containing position (edge, s)
    int arc_at(int edge, double s) const {
        if (events.empty()) return 0;
        auto it = std::lower_bound(
            events.begin(), events.end(), std::pair<int, double>{edge, s},
            [](const Event& e, const std::pair<int, double>& q) {
                return e.edge < q.first ||
                       (e.edge == q.first && e.s < q.second);
            });
        return static_cast<int>(it - events.begin()) % m();
    }
};

ArcStructure arc_structure(const SelfDiagram& D) {
    ArcStructure A;
    for (size_t c = 0; c < D.crossings.size(); ++c)
        A.events.push_back({D.crossings[c].e_under, D.crossings[c].s_under,
                            static_cast<int>(c)});
    std::sort(A.events.begin(), A.events.end(),
              [](const ArcStructure::Event& a, const ArcStructure::Event& b) {
                  return a.edge < b.edge || (a.edge == b.edge && a.s < b.s);
              });
    return A;
}

WirtingerPresentation wirtinger(const SelfDiagram& D, const ArcStructure& A) {
    WirtingerPresentation W;
    int m = A.m();
    W.n_generators = std::max(m, 1);
    for (int k = 0; k < m; ++k) {
        const Crossing& c = D.crossings[A.events[k].crossing];
        WirtingerPresentation::Relation r;
        r.in = k;
        r.out = (k + 1) % m;
        r.over = A.arc_at(c.e_over, c.s_over);
        r.sign = c.sign;
        W.relations.push_back(r);
    }
    return W;
}

// ---------------------------------------------------------------------------
// Alexander polynomial via modular evaluation + interpolation
// ---------------------------------------------------------------------------
long long det_mod(std::vector<std::vector<long long>> M, long long p) {
    int n = static_cast<int>(M.size());
    auto power = [&](long long b, long long e) {
        long long r = 1;
        b %= p;
        while (e) {
            if (e & 1) r = (__int128)r * b % p;
            b = (__int128)b * b % p;
            e >>= 1;
        }
        return r;
    };
    long long det = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (M[r][col] % p != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = p - det;
        }
        long long ipiv = power(M[col][col], p - 2);
        det = (__int128)det * M[col][col] % p;
        for (int r = col + 1; r < n; ++r) {
            long long f = (__int128)M[r][col] % p * ipiv % p;
            if (!f) continue;
            for (int c2 = col; c2 < n; ++c2)
                M[r][c2] = ((M[r][c2] - (__int128)f * M[col][c2]) % p + p) % p;
        }
    }
    return det % p;
}

// det of the Alexander minor at integer t, mod p
long long alex_eval(const WirtingerPresentation& W, long long t, long long p) {
    int m = static_cast<int>(W.relations.size());
    if (m <= 1) return 1;
    std::vector<std::vector<long long>> M(m - 1,
                                          std::vector<long long>(m - 1, 0));
    auto add = [&](int row, int col, long long v) {
        if (row == 0 || col == 0) return;  // deleted row/column 0
        M[row - 1][col - 1] = ((M[row - 1][col - 1] + v) % p + p) % p;
    };
    long long tm = ((t % p) + p) % p;
    for (int k = 0; k < m; ++k) {
        const auto& r = W.relations[k];
        if (r.sign > 0) {
            add(k, r.in, tm);
            add(k, r.over, (1 - tm + p) % p);
            add(k, r.out, p - 1);
        } else {
            add(k, r.in, 1);
            add(k, r.over, (tm - 1 + p) % p);
            add(k, r.out, (p - tm) % p);
        }
    }
    return det_mod(std::move(M), p);
}

// full coefficient vector (degree <= m-1) of the minor determinant, mod p
std::vector<long long> alex_poly_mod(const WirtingerPresentation& W,
                                     long long p) {
    int m = static_cast<int>(W.relations.size());
    int npts = std::max(m, 1);
    std::vector<long long> xs(npts), ys(npts);
    for (int i = 0; i < npts; ++i) {
        xs[i] = i;
        ys[i] = alex_eval(W, i, p);
    }
    // Lagrange interpolation over F_p, Newton form
    auto power = [&](long long b, long long e) {
        long long r = 1;
        b %= p;
        while (e) {
            if (e & 1) r = (__int128)r * b % p;
            b = (__int128)b * b % p;
            e >>= 1;
        }
        return r;
    };
    std::vector<long long> dd = ys;  // divided differences
    for (int j = 1; j < npts; ++j)
        for (int i = npts - 1; i >= j; --i) {
            long long num = (dd[i] - dd[i - 1] % p + p) % p;
            long long den = ((xs[i] - xs[i - j]) % p + p) % p;
            dd[i] = (__int128)num * power(den, p - 2) % p;
        }
    // expand Newton form into monomial coefficients
    std::vector<long long> coef(npts, 0), base{1};
    for (int i = 0; i < npts; ++i) {
        for (size_t k = 0; k < base.size(); ++k)
            coef[k] = (coef[k] + (__int128)dd[i] * base[k]) % p;
        // base *= (x - xs[i])
        base.push_back(0);
        for (int k = static_cast<int>(base.size()) - 1; k > 0; --k)
            base[k] = (base[k - 1] +
                       (__int128)base[k] * ((p - xs[i] % p) % p)) % p;
        base[0] = (__int128)base[0] * ((p - xs[i] % p) % p) % p;
    }
    return coef;
}

std::optional<KnotSignature> signature_from(const WirtingerPresentation& W) {
    constexpr long long P1 = 1'000'000'007LL, P2 = 998'244'353LL;
    auto c1 = alex_poly_mod(W, P1), c2 = alex_poly_mod(W, P2);
    size_t nc = std::max(c1.size(), c2.size());
    c1.resize(nc, 0);
    c2.resize(nc, 0);
    // CRT lift to symmetric range
    const __int128 P = (__int128)P1 * P2;
    // inverse of P1 mod P2
    long long inv_p1 = 1;
    {
        long long b = P1 % P2, e = P2 - 2, r = 1;
        while (e) {
            if (e & 1) r = (__int128)r * b % P2;
            b = (__int128)b * b % P2;
            e >>= 1;
        }
        inv_p1 = r;
    }
    std::vector<long long> coef(nc);
    for (size_t i = 0; i < nc; ++i) {
        long long k = ((c2[i] - c1[i]) % P2 + P2) % P2;
        k = (__int128)k * inv_p1 % P2;
        __int128 v = (__int128)c1[i] + (__int128)k * P1;  // in [0, P)
        if (v > P / 2) v -= P;
        coef[i] = static_cast<long long>(v);
    }
    // strip leading zeros (high degree) and the t^k unit factor (low zeros)
    while (coef.size() > 1 && coef.back() == 0) coef.pop_back();
    size_t low = 0;
    while (low + 1 < coef.size() && coef[low] == 0) ++low;
    coef.erase(coef.begin(), coef.begin() + low);
    if (coef.empty() || (coef.size() == 1 && coef[0] == 0)) return std::nullopt;
    long long at1 = 0, atm1 = 0, sgn = 1;
    for (size_t i = 0; i < coef.size(); ++i) {
        at1 += coef[i];
        atm1 += (i % 2 ? -coef[i] : coef[i]);
    }
    if (at1 == -1) {
        sgn = -1;
    } else if (at1 != 1) {
        return std::nullopt;  // not a valid knot diagram computation
    }
    KnotSignature sig;
    sig.alexander.resize(coef.size());
    for (size_t i = 0; i < coef.size(); ++i) sig.alexander[i] = sgn * coef[i];
    sig.determinant = std::llabs(atm1);
    return sig;
}

std::optional<KnotSignature> signature_one_projection(
    const std::vector<Point3>& V, const Basis& B) {
    auto D = self_diagram(V, B);
    if (!D) return std::nullopt;
    auto A = arc_structure(*D);
    if (A.m() == 0) return KnotSignature{};  // no crossings: unknot
    auto W = wirtinger(*D, A);
    return signature_from(W);
}

}  // namespace

std::string to_string(const KnotSignature& s) {
    std::string out = "det=" + std::to_string(s.determinant) + " poly=[";
    for (size_t i = 0; i < s.alexander.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s.alexander[i]);
    }
    return out + "]";
}

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::EssentialCertified: return "essential_certified";
        case VerdictStatus::InessentialCertified: return "inessential_certified";
        case VerdictStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

KnotSignature knot_signature(const std::vector<Point3>& loop,
                             const ToleranceConfig& tol, uint64_t seed) {
    (void)tol;
    // multi-projection consistency: accept the first signature confirmed by a
    // second independent valid projection
    std::vector<KnotSignature> found;
    for (int attempt = 0; attempt < 24; ++attempt) {
        Basis B = basis_from_dir(seeded_dir(seed, attempt));
        auto s = signature_one_projection(loop, B);
        if (!s) continue;
        for (const auto& f : found)
            if (f == *s) return *s;
        found.push_back(*s);
    }
    throw ProjectionDegenerate(
        "no two consistent generic projections found for signature");
}

KnotSignature knot_signature(const PolygonalKnot& K, const ToleranceConfig& tol,
                             uint64_t seed) {
    return knot_signature(K.vertices(), tol, seed);
}

// ---------------------------------------------------------------------------
// linking number
// ---------------------------------------------------------------------------
int linking_number(const std::vector<Point3>& c1, const std::vector<Point3>& c2,
                   const ToleranceConfig& tol, uint64_t seed) {
    int n1 = static_cast<int>(c1.size()), n2 = static_cast<int>(c2.size());
    if (n1 < 3 || n2 < 3) throw KnotError("closed polylines need >= 3 vertices");
    double dmin = 1e300, diam = 1e-12;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            Segment a{c1[i], c1[(i + 1) % n1]}, b{c2[j], c2[(j + 1) % n2]};
            dmin = std::min(dmin, segment_segment_distance(a, b));
            diam = std::max(diam, (c1[i] - c2[j]).norm());
        }
    if (dmin <= tol.tol_embed_rel * diam)
        throw NotDisjoint("polylines touch (distance " + std::to_string(dmin) +
                          ")");

    for (int attempt = 0; attempt < 48; ++attempt) {
        Basis B = basis_from_dir(seeded_dir(seed, attempt));
        auto pra = project(c1, B), prb = project(c2, B);
        double sc = std::max(scale2d(pra), scale2d(prb));
        bool valid = true;
        long long acc = 0;
        for (int i = 0; i < n1 && valid; ++i) {
            const P2 &a0 = pra[i], &a1 = pra[(i + 1) % n1];
            for (int j = 0; j < n2 && valid; ++j) {
                const P2 &b0 = prb[j], &b1 = prb[(j + 1) % n2];
                // vertex proximity guards (parity safety)
                if (pt_seg_dist2d(b0.x, b0.y, a0, a1) < EPS_NEAR * sc ||
                    pt_seg_dist2d(a0.x, a0.y, b0, b1) < EPS_NEAR * sc) {
                    valid = false;
                    break;
                }
                Hit2D h;
                auto st = cross2d(a0, a1, b0, b1, EPS_NEAR * sc, h);
                if (st == Cross2D::Ambiguous) {
                    valid = false;
                    break;
                }
                if (st == Cross2D::None) continue;
                if (h.s < EPS_PARAM || h.s > 1 - EPS_PARAM ||
                    h.t < EPS_PARAM || h.t > 1 - EPS_PARAM) {
                    valid = false;
                    break;
                }
                double za = a0.z + h.s * (a1.z - a0.z);
                double zb = b0.z + h.t * (b1.z - b0.z);
                if (std::abs(za - zb) < EPS_DEPTH * sc) {
                    valid = false;
                    break;
                }
                double ux = a1.x - a0.x, uy = a1.y - a0.y;
                double wx = b1.x - b0.x, wy = b1.y - b0.y;
                // crossing sign = orientation of (over_dir, under_dir)
                int det_sign = (ux * wy - uy * wx) > 0 ? +1 : -1;
                acc += (za > zb) ? det_sign : -det_sign;  // sum = 2 lk
            }
        }
        if (!valid) continue;
        if (acc % 2 != 0) continue;  // parity violation: degenerate picture
        return static_cast<int>(acc / 2);
    }
    throw ProjectionDegenerate("no generic projection for linking number");
}

// ---------------------------------------------------------------------------
// theta graphs
// ---------------------------------------------------------------------------
namespace {

// polyline of the knot arc from a to b following orientation
std::vector<Point3> knot_arc(const PolygonalKnot& K, const KnotPoint& a,
                             const KnotPoint& b) {
    std::vector<Point3> out{a.point};
    int n = K.size();
    double eps = 1e-12 * std::max(K.diameter(), 1.0);
    if (a.edge_index == b.edge_index && a.t < b.t) {
        out.push_back(b.point);
        return out;
    }
    for (int e = a.edge_index + 1; ; ++e) {
        Point3 v = K.vertex(e);
        if ((v - out.back()).norm() > eps) out.push_back(v);
        if (K.mod(e) == b.edge_index) break;
        if (e > a.edge_index + n + 1) throw KnotError("arc walk failed");
    }
    if ((b.point - out.back()).norm() > eps) out.push_back(b.point);
    return out;
}

// closest distance between segments, ignoring the portions within radius r0/r1
// of the shared-endpoint exclusion balls centered c0 (and optionally c1)
std::vector<Segment> clip_outside_ball(const Segment& s, const Point3& c,
                                       double r) {
    // solve |s(t) - c|^2 = r^2
    Vec3 d = s.dir(), w = s.p0 - c;
    double A = d.norm2(), B = 2 * w.dot(d), C = w.norm2() - r * r;
    std::vector<Segment> out;
    if (A < 1e-300) return out;
    double disc = B * B - 4 * A * C;
    if (disc <= 0) {
        // entirely inside or outside
        if (C > 0) out.push_back(s);
        return out;
    }
    double sq = std::sqrt(disc);
    double t0 = (-B - sq) / (2 * A), t1 = (-B + sq) / (2 * A);
    if (t0 > 0 && t0 < 1 + 1e-12) {
        double hi = std::min(t0, 1.0);
        if (hi > 1e-12) out.push_back({s.at(0), s.at(hi)});
    } else if (t0 >= 1 && C > 0) {
        out.push_back(s);
        return out;
    }
    if (t1 < 1 && t1 > -1e-12) {
        double lo = std::max(t1, 0.0);
        if (lo < 1 - 1e-12) out.push_back({s.at(lo), s.at(1)});
    } else if (t1 <= 0 && C > 0) {
        out.push_back(s);
    }
    return out;
}

std::vector<Segment> clip_outside_balls(const Segment& s,
                                        const std::vector<std::pair<Point3, double>>& balls) {
    std::vector<Segment> cur{s};
    for (const auto& [c, r] : balls) {
        std::vector<Segment> nxt;
        for (const auto& seg : cur) {
            auto parts = clip_outside_ball(seg, c, r);
            nxt.insert(nxt.end(), parts.begin(), parts.end());
        }
        cur = std::move(nxt);
    }
    return cur;
}

// check that a candidate beta chain is disjoint from K except at the shared
// endpoints a (= chain front) and b (= chain back)
bool beta_clear(const PolygonalKnot& K, const std::vector<Point3>& chain,
                const Point3& a, const Point3& b, const ToleranceConfig& tol) {
    int n = K.size();
    double diam = std::max(K.diameter(), 1e-12);
    double eps_d = std::max(tol.tol_embed(), 1e-9 * diam);
    double tiny = 1e-9 * diam;
    // exclusion radii: inside them only the edges through the endpoint live
    auto foreign_dist = [&](const Point3& p) {
        double d = 1e300;
        for (int e = 0; e < n; ++e) {
            double de = point_segment_distance(p, K.edge(e));
            if (de > tiny) d = std::min(d, de);
        }
        return d;
    };
    double chain_len = 0;
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        chain_len += (chain[i + 1] - chain[i]).norm();
    double ra = std::min({0.02 * chain_len, 0.25 * foreign_dist(a)});
    double rb = std::min({0.02 * chain_len, 0.25 * foreign_dist(b)});
    if (ra <= 0 || rb <= 0) return false;
    std::vector<std::pair<Point3, double>> balls{{a, ra}, {b, rb}};

    // angular separation at the shared endpoints: the K-edges through a (or b)
    // must leave in directions distinct from the beta chain's direction there
    auto endpoint_ok = [&](const Point3& p, const Vec3& beta_dir) {
        Dir3 bd = beta_dir.normalized();
        for (int e = 0; e < n; ++e) {
            Segment s = K.edge(e);
            if (point_segment_distance(p, s) > tiny) continue;
            for (const Point3& end : {s.p0, s.p1}) {
                Vec3 r = end - p;
                if (r.norm() < tiny) continue;
                if (r.normalized().cross(bd).norm() < 1e-9 &&
                    r.normalized().dot(bd) > 0)
                    return false;  // collinear overlap leaving the endpoint
            }
        }
        return true;
    };
    if (!endpoint_ok(a, chain[1] - chain[0])) return false;
    if (!endpoint_ok(b, chain[chain.size() - 2] - chain.back())) return false;

    for (size_t i = 0; i + 1 < chain.size(); ++i) {
        Segment leg{chain[i], chain[i + 1]};
        auto leg_parts = clip_outside_balls(leg, balls);
        for (int e = 0; e < n; ++e) {
            auto edge_parts = clip_outside_balls(K.edge(e), balls);
            for (const auto& lp : leg_parts)
                for (const auto& ep : edge_parts)
                    if (segment_segment_distance(lp, ep) <= eps_d) return false;
        }
    }
    return true;
}

}  // namespace

ThetaGraph build_theta(const PolygonalKnot& K, const KnotPoint& a,
                       const KnotPoint& b, double epsilon,
                       const ToleranceConfig& tol, uint64_t seed) {
    double diam = std::max(K.diameter(), 1e-12);
    if ((a.point - b.point).norm() < 1e-9 * diam)
        throw KnotError("secant endpoints coincide");
    if (common_straight_subarc(K, a, b, tol))
        throw KnotError("secant endpoints on a common straight subarc");
    ThetaGraph th;
    th.ka = a;
    th.kb = b;
    th.a = a.point;
    th.b = b.point;
    th.alpha = knot_arc(K, a, b);
    {
        auto g = knot_arc(K, b, a);  // b -> a along the knot
        std::reverse(g.begin(), g.end());
        th.gamma = std::move(g);     // stored a -> b
    }
    std::vector<Point3> straight{a.point, b.point};
    if (beta_clear(K, straight, a.point, b.point, tol)) {
        th.beta = std::move(straight);
        return th;
    }
    // seeded two-segment detours
    double len = (b.point - a.point).norm();
    double eps = epsilon > 0 ? epsilon : 0.1 * len;
    Vec3 axis = (b.point - a.point) / len;
    Vec3 ref = std::abs(axis.x) < 0.8 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 e1 = ref.cross(axis).normalized(), e2 = axis.cross(e1);
    std::mt19937_64 rng(seed * 69093u + 11u);
    std::uniform_real_distribution<double> U(0.0, 2 * 3.14159265358979323846);
    for (int attempt = 0; attempt < 64; ++attempt) {
        double phi = U(rng);
        double mag = eps * (1.0 + 0.25 * (attempt % 4));
        Point3 mid = (a.point + b.point) * 0.5 +
                     (e1 * std::cos(phi) + e2 * std::sin(phi)) * mag;
        std::vector<Point3> chain{a.point, mid, b.point};
        if (beta_clear(K, chain, a.point, b.point, tol)) {
            th.beta = std::move(chain);
            return th;
        }
    }
    throw CannotEmbed("no embedded beta found after retries");
}

// ---------------------------------------------------------------------------
// parallel loop with zero linking
// ---------------------------------------------------------------------------
namespace {

std::vector<Point3> closed_alpha_beta(const ThetaGraph& th) {
    std::vector<Point3> L = th.alpha;  // a..b
    for (size_t i = th.beta.size() - 1; i-- > 1;) L.push_back(th.beta[i]);
    return L;  // closed: a..b then beta interior back toward a
}

double bbox_diameter(const std::vector<Point3>& v) {
    Point3 lo = v[0], hi = v[0];
    for (const auto& p : v) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
        hi.z = std::max(hi.z, p.z);
    }
    return std::max((hi - lo).norm(), 1e-12);
}

// Merge duplicate vertices and collinear pass-through vertices of a closed
// polyline. Splitting a knot edge at a secant endpoint leaves collinear
// vertex runs; measuring edge clearance on the raw split polyline would see
// the two halves of one edge as "non-adjacent" neighbors at distance ~0 and
// collapse the offset budget. The simplified curve is geometrically the
// same set of points.
std::vector<Point3> simplify_closed(std::vector<Point3> v) {
    if (v.size() < 4) return v;
    double dup_tol = 1e-9 * bbox_diameter(v);
    for (bool changed = true; changed && v.size() > 3;) {
        changed = false;
        for (size_t i = 0; i < v.size() && v.size() > 3;) {
            size_t n = v.size();
            const Point3& prev = v[(i + n - 1) % n];
            const Point3& cur = v[i];
            const Point3& next = v[(i + 1) % n];
            bool drop = (cur - prev).norm() < dup_tol ||
                        (next - cur).norm() < dup_tol;
            if (!drop && collinear(prev, cur, next, 1e-9) &&
                (cur - prev).dot(next - cur) > 0)
                drop = true;
            if (drop) {
                v.erase(v.begin() + static_cast<long>(i));
                changed = true;
            } else {
                ++i;
            }
        }
    }
    return v;
}

// min distance between non-adjacent edges of a closed polyline
double closed_polyline_clearance(const std::vector<Point3>& v) {
    int n = static_cast<int>(v.size());
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // wrap-adjacent
            Segment si{v[i], v[(i + 1) % n]};
            Segment sj{v[j], v[(j + 1) % n]};
            best = std::min(best, segment_segment_distance(si, sj));
        }
    }
    return best;
}

double dist_point_polyline(const Point3& p, const std::vector<Point3>& v) {
    double d = 1e300;
    size_t n = v.size();
    for (size_t j = 0; j < n; ++j) {
        Segment s2{v[j], v[(j + 1) % n]};
        d = std::min(d, segment_segment_distance(Segment{p, p}, s2));
    }
    return d;
}

double min_dist_to_knot(const std::vector<Point3>& poly, bool closed,
                        const std::vector<Point3>& knot) {
    double d = 1e300;
    size_t np = poly.size(), nk = knot.size();
    size_t ep = closed ? np : np - 1;
    for (size_t i = 0; i < ep; ++i) {
        Segment s1{poly[i], poly[(i + 1) % np]};
        for (size_t j = 0; j < nk; ++j) {
            Segment s2{knot[j], knot[(j + 1) % nk]};
            d = std::min(d, segment_segment_distance(s1, s2));
        }
    }
    return d;
}

// offset polyline of the closed loop L by h along a rotation-minimizing
// normal field; closes with a short rotation fan
std::vector<Point3> offset_loop(const std::vector<Point3>& L, double h,
                                const Vec3& n_seed) {
    size_t M = L.size();
    std::vector<Vec3> edir(M), N(M);
    for (size_t i = 0; i < M; ++i) edir[i] = (L[(i + 1) % M] - L[i]).normalized();
    Vec3 n0 = (n_seed - edir[0] * n_seed.dot(edir[0]));
    if (n0.norm() < 1e-9) {
        Vec3 alt = std::abs(edir[0].x) < 0.8 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        n0 = alt - edir[0] * alt.dot(edir[0]);
    }
    N[0] = n0.normalized();
    for (size_t i = 1; i < M; ++i) {
        Vec3 cand = N[i - 1] - edir[i] * N[i - 1].dot(edir[i]);
        if (cand.norm() < 1e-9) {
            Vec3 alt = std::abs(edir[i].x) < 0.8 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
            cand = alt - edir[i] * alt.dot(edir[i]);
        }
        N[i] = cand.normalized();
    }
    std::vector<Point3> out;
    out.reserve(2 * M + 8);
    for (size_t i = 0; i < M; ++i) {
        out.push_back(L[i] + N[i] * h);
        out.push_back(L[(i + 1) % M] + N[i] * h);
    }
    // holonomy fan at the base vertex L[0]: rotate N[M-1] into N[0] around
    // the outgoing edge direction; interpolate on the normal circle
    Vec3 from = N[M - 1], to = N[0];
    Vec3 axis = edir[0];
    Vec3 fp = from - axis * from.dot(axis);
    if (fp.norm() < 1e-9) fp = to;  // rare: fall back to the target normal
    Vec3 f_perp = fp.normalized();
    Vec3 t_perp = (to - axis * to.dot(axis)).normalized();
    Vec3 cr = f_perp.cross(t_perp);
    double ang = std::atan2(cr.dot(axis), f_perp.dot(t_perp));
    int steps = std::max(1, static_cast<int>(std::ceil(std::abs(ang) / 0.8)));
    for (int s = 1; s < steps; ++s) {
        double th = ang * s / steps;
        Vec3 n = f_perp * std::cos(th) + axis.cross(f_perp) * std::sin(th);
        out.push_back(L[0] + n * h);
    }
    return out;
}

// insert |turns| meridian twists around segment [P,Q] into delta right after
// vertex index iv (the twists change lk(delta, K) by +-1 each)
std::vector<Point3> with_twists(const std::vector<Point3>& delta, size_t iv,
                                const Point3& P, const Point3& Q, double h,
                                int turns) {
    if (turns == 0) return delta;
    Vec3 axis = (Q - P).normalized();
    Point3 mid = (P + Q) * 0.5;
    Vec3 ref = delta[iv] - (mid + axis * (delta[iv] - mid).dot(axis));
    Vec3 n1 = ref.norm() > 1e-12 ? ref.normalized()
                                 : (std::abs(axis.x) < 0.8
                                        ? axis.cross(Vec3{1, 0, 0}).normalized()
                                        : axis.cross(Vec3{0, 1, 0}).normalized());
    Vec3 n2 = axis.cross(n1);
    std::vector<Point3> out(delta.begin(), delta.begin() + iv + 1);
    int k = std::abs(turns), sgn = turns > 0 ? +1 : -1;
    int steps = 8 * k;
    for (int s = 1; s <= steps; ++s) {
        double th = sgn * 2.0 * 3.14159265358979323846 * s / 8.0;
        double along = -0.1 + 0.2 * s / steps;  // slight drift along the axis
        out.push_back(mid + axis * (along * h) + n1 * (h * std::cos(th)) +
                      n2 * (h * std::sin(th)));
    }
    out.insert(out.end(), delta.begin() + iv + 1, delta.end());
    return out;
}

}  // namespace

ParallelLoop parallel_with_zero_linking(const ThetaGraph& th,
                                        const ToleranceConfig& tol,
                                        double offset_frac, uint64_t seed) {
    std::vector<Point3> K = th.alpha;  // closed knot = alpha + reverse(gamma)
    for (size_t i = th.gamma.size() - 1; i-- > 1;) K.push_back(th.gamma[i]);
    K = simplify_closed(std::move(K));
    std::vector<Point3> L = simplify_closed(closed_alpha_beta(th));

    double knot_clear = closed_polyline_clearance(K);
    double h = offset_frac * knot_clear;
    double diam = bbox_diameter(K);

    std::mt19937_64 rng(seed * 2654435761u + 3u);
    std::normal_distribution<double> N01(0.0, 1.0);
    // The compensating twists must wrap an edge of the knot itself (a loop
    // around a beta edge would not change the linking number with alpha u
    // gamma). Host them on the longest L edge that lies on the knot.
    size_t mid_edge = 0;
    double best_len = -1;
    for (size_t e = 0; e < L.size(); ++e) {
        const Point3& p = L[e];
        const Point3& q = L[(e + 1) % L.size()];
        double len = (q - p).norm();
        if (len <= best_len) continue;
        Point3 m = (p + q) * 0.5;
        if (dist_point_polyline(p, K) < 1e-9 * diam &&
            dist_point_polyline(q, K) < 1e-9 * diam &&
            dist_point_polyline(m, K) < 1e-9 * diam) {
            best_len = len;
            mid_edge = e;
        }
    }
    if (best_len < 0) {  // no on-knot edge survived simplification; fall back
        for (size_t e = 0; e < L.size(); ++e) {
            double len = (L[(e + 1) % L.size()] - L[e]).norm();
            if (len > best_len) {
                best_len = len;
                mid_edge = e;
            }
        }
    }
    Point3 P = L[mid_edge], Q = L[(mid_edge + 1) % L.size()];

    for (int attempt = 0; attempt < 10; ++attempt, h *= 0.5) {
        Vec3 nseed{N01(rng), N01(rng), N01(rng)};
        if (nseed.norm() < 1e-6) nseed = Vec3{0, 0, 1};
        std::vector<Point3> delta = offset_loop(L, h, nseed.normalized());
        if (min_dist_to_knot(delta, true, K) < 0.05 * h) continue;
        int lk0;
        try {
            lk0 = linking_number(delta, K, tol, seed + attempt);
        } catch (const KnotError&) {
            continue;
        }
        if (lk0 == 0) return {std::move(delta), 0};
        // locate delta vertex paralleling the host edge: offset_loop emits
        // 2 vertices per L edge, in order
        size_t iv = 2 * mid_edge;
        // probe twist orientation with one turn
        auto probe = with_twists(delta, iv, P, Q, 0.8 * h, +1);
        int lk1;
        try {
            lk1 = linking_number(probe, K, tol, seed + 100 + attempt);
        } catch (const KnotError&) {
            continue;
        }
        int per_turn = lk1 - lk0;
        if (per_turn != 1 && per_turn != -1) continue;  // degenerate probe
        int turns = -lk0 / per_turn;
        auto fixed = with_twists(delta, iv, P, Q, 0.8 * h, turns);
        if (min_dist_to_knot(fixed, true, K) < 1e-12) continue;
        int lkf;
        try {
            lkf = linking_number(fixed, K, tol, seed + 200 + attempt);
        } catch (const KnotError&) {
            continue;
        }
        if (lkf == 0) return {std::move(fixed), 0};
    }
    throw OffsetCollision("could not build a zero-linking parallel loop");
}

// ---------------------------------------------------------------------------
// complement model
// ---------------------------------------------------------------------------
struct ComplementModel::Projection {
    std::vector<Point3> loop;
    SelfDiagram dia;
    ArcStructure arcs;
    WirtingerPresentation pres;
};

ComplementModel::ComplementModel() = default;
ComplementModel::~ComplementModel() = default;
ComplementModel::ComplementModel(ComplementModel&&) noexcept = default;
ComplementModel& ComplementModel::operator=(ComplementModel&&) noexcept = default;

namespace {

// defensive check: images satisfy every Wirtinger relation
bool hom_valid(const FGroup& G, const WirtingerPresentation& W,
               const std::vector<uint16_t>& img) {
    for (const auto& r : W.relations) {
        uint16_t g = img[r.over];
        uint16_t conj = r.sign > 0
                            ? G.mul[G.mul[g][img[r.in]]][G.inv[g]]
                            : G.mul[G.mul[G.inv[g]][img[r.in]]][g];
        if (conj != img[r.out]) return false;
    }
    return true;
}

// DFS over meridian images in a conjugacy class; collects non-constant homs
struct HomSearch {
    const FGroup& G;
    const WirtingerPresentation& W;
    const std::vector<uint16_t>& cls;
    std::chrono::steady_clock::time_point deadline;
    int m;
    std::vector<uint16_t> val;
    std::vector<char> assigned;
    std::vector<std::vector<uint16_t>>& out;
    size_t cap;
    long long nodes = 0;
    bool expired = false;

    HomSearch(const FGroup& g, const WirtingerPresentation& w,
              const std::vector<uint16_t>& c,
              std::chrono::steady_clock::time_point dl,
              std::vector<std::vector<uint16_t>>& o, size_t cap_)
        : G(g), W(w), cls(c), deadline(dl),
          m(static_cast<int>(w.relations.size())), val(m, 0), assigned(m, 0),
          out(o), cap(cap_) {}

    bool time_ok() {
        if (++nodes % 256 == 0 &&
            std::chrono::steady_clock::now() > deadline) {
            expired = true;
        }
        return !expired;
    }

    uint16_t conj(uint16_t g, uint16_t x, int sign) const {
        if (sign > 0) return G.mul[G.mul[g][x]][G.inv[g]];
        return G.mul[G.mul[G.inv[g]][x]][g];
    }

    void emit() {
        bool constant = true;
        for (int i = 1; i < m; ++i)
            if (val[i] != val[0]) {
                constant = false;
                break;
            }
        if (constant) return;  // abelian image: useless as a certificate
        if (out.size() < cap && hom_valid(G, W, val)) out.push_back(val);
    }

    void step(int i) {
        if (out.size() >= cap || !time_ok()) return;
        if (i >= m) return;  // closure handled at i == m-1
        const auto& r = W.relations[i];  // in = i, out = (i+1) % m
        auto advance = [&](uint16_t over_img) {
            uint16_t nxt = conj(over_img, val[i], r.sign);
            int o = r.out;
            if (o == 0) {  // closure relation (i == m-1)
                if (nxt == val[0] && i == m - 1) emit();
                return;
            }
            if (assigned[o]) {
                if (val[o] == nxt) step(i + 1);
                return;
            }
            assigned[o] = 1;
            val[o] = nxt;
            step(i + 1);
            assigned[o] = 0;
        };
        if (assigned[r.over]) {
            advance(val[r.over]);
        } else {
            for (uint16_t c : cls) {
                if (out.size() >= cap || expired) return;
                assigned[r.over] = 1;
                val[r.over] = c;
                advance(c);
                assigned[r.over] = 0;
            }
        }
    }

    void run() {
        if (m == 0) return;
        assigned[0] = 1;
        val[0] = cls.front();
        step(0);
    }
};

// Fox coloring system over F_p: one variable per arc, relation
// c_out + c_in - 2 c_over = 0 per crossing, normalized c_0 = 0.
// Returns a basis of the solution space (each vector non-constant).
std::vector<std::vector<int>> fox_colorings(const WirtingerPresentation& W,
                                            int p) {
    int m = static_cast<int>(W.relations.size());
    if (m == 0) return {};
    // columns: arcs 1..m-1 (arc 0 pinned to 0); rows: relations
    int nv = m - 1;
    if (nv == 0) return {};
    std::vector<std::vector<int>> M(W.relations.size(),
                                    std::vector<int>(nv, 0));
    for (size_t r = 0; r < W.relations.size(); ++r) {
        auto add = [&](int arc, int coef) {
            if (arc == 0) return;
            M[r][arc - 1] = ((M[r][arc - 1] + coef) % p + p) % p;
        };
        add(W.relations[r].out, 1);
        add(W.relations[r].in, 1);
        add(W.relations[r].over, -2);
    }
    // Gaussian elimination over F_p
    auto inv_p = [&](int a) {
        int r = 1, b = a % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    int rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < nv && rank < static_cast<int>(M.size()); ++col) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(M.size()); ++r)
            if (M[r][col] % p != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[piv], M[rank]);
        int ip = inv_p(M[rank][col]);
        for (int c = col; c < nv; ++c) M[rank][c] = M[rank][c] * ip % p;
        for (int r = 0; r < static_cast<int>(M.size()); ++r) {
            if (r == rank || M[r][col] == 0) continue;
            int f = M[r][col];
            for (int c = col; c < nv; ++c)
                M[r][c] = ((M[r][c] - f * M[rank][c]) % p + p) % p;
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<char> is_pivot(nv, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<int>> basis;
    for (int free_col = 0; free_col < nv; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<int> sol(m, 0);  // includes pinned arc 0
        sol[free_col + 1] = 1;
        for (int r = 0; r < rank; ++r) {
            int pc = pivot_col[r];
            sol[pc + 1] = ((-M[r][free_col]) % p + p) % p;
        }
        basis.push_back(std::move(sol));
    }
    return basis;
}

}  // namespace

ComplementModel ComplementModel::build(const std::vector<Point3>& loop,
                                       const ToleranceConfig& tol,
                                       uint64_t seed, int timebox_ms) {
    ComplementModel M;
    M.sig_ = knot_signature(loop, tol, seed);
    std::shared_ptr<Projection> pr;
    for (int attempt = 0; attempt < 48 && !pr; ++attempt) {
        Basis B = basis_from_dir(seeded_dir(seed + 17, attempt));
        auto D = self_diagram(loop, B);
        if (!D) continue;
        auto p = std::make_shared<Projection>();
        p->loop = loop;
        p->dia = std::move(*D);
        p->arcs = arc_structure(p->dia);
        p->pres = wirtinger(p->dia, p->arcs);
        // sanity: a signature computed from this projection must match the
        // voted signature (guards against a silently-misread diagram)
        if (p->arcs.m() > 0) {
            auto s = signature_from(p->pres);
            if (!s || !(*s == M.sig_)) continue;
        } else if (!M.sig_.is_unknot()) {
            continue;
        }
        pr = std::move(p);
    }
    if (!pr)
        throw ProjectionDegenerate("no generic projection for complement model");
    M.pres_ = pr->pres;
    M.projections_.push_back(pr);

    // homomorphism harvest within the time box. Dihedral-type groups (S3 =
    // D3 included) are searched exactly via the linear coloring system; the
    // remaining symmetric/alternating groups by depth-first search over
    // meridian classes.
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(timebox_ms);
    std::map<int, std::vector<std::vector<int>>> fox_cache;
    auto fox = [&](int p) -> const std::vector<std::vector<int>>& {
        auto it = fox_cache.find(p);
        if (it == fox_cache.end())
            it = fox_cache.emplace(p, fox_colorings(M.pres_, p)).first;
        return it->second;
    };
    int m = M.pres_.n_generators;
    for (const auto& G : registry().groups) {
        if (M.homs_.size() >= 96 ||
            std::chrono::steady_clock::now() > deadline)
            break;
        if (!G.refl.empty()) {
            int n = static_cast<int>(G.refl.size());
            size_t before = M.homs_.size();
            for (int p : {2, 3, 5, 7}) {
                if (n % p != 0) continue;
                for (const auto& c : fox(p)) {
                    if (M.homs_.size() - before >= 8) break;
                    std::vector<uint16_t> img(m);
                    for (int i = 0; i < m; ++i)
                        img[i] = G.refl[(n / p) * c[i] % n];
                    if (hom_valid(G, M.pres_, img))
                        M.homs_.push_back({G.name, std::move(img)});
                }
            }
        } else {
            for (const auto& cls : G.classes) {
                if (std::chrono::steady_clock::now() > deadline) break;
                std::vector<std::vector<uint16_t>> found;
                HomSearch hs(G, M.pres_, cls, deadline, found, 8);
                hs.run();
                for (auto& f : found) M.homs_.push_back({G.name, std::move(f)});
                if (M.homs_.size() >= 96) break;
            }
        }
    }
    return M;
}

std::vector<int> ComplementModel::loop_word(
    const std::vector<Point3>& delta) const {
    const Projection& pr = *projections_.front();
    int nk = static_cast<int>(pr.loop.size());
    int nd = static_cast<int>(delta.size());
    const auto& PK = pr.dia.P;

    // knot clearance bounds the safe perturbation of delta
    double clear = 1e300;
    for (int i = 0; i < nd; ++i) {
        Segment s1{delta[i], delta[(i + 1) % nd]};
        for (int j = 0; j < nk; ++j) {
            Segment s2{pr.loop[j], pr.loop[(j + 1) % nk]};
            clear = std::min(clear, segment_segment_distance(s1, s2));
        }
    }
    if (clear <= 0) throw NotDisjoint("loop touches the knot");

    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<Point3> d = delta;
    for (int attempt = 0; attempt < 12; ++attempt) {
        auto PD = project(d, pr.dia.B);
        double sc = std::max(pr.dia.scale, scale2d(PD));
        bool valid = true;
        struct Ev {
            int dedge;
            double s;
            int arc;
            int sign;
        };
        std::vector<Ev> evs;
        for (int i = 0; i < nd && valid; ++i) {
            const P2 &d0 = PD[i], &d1 = PD[(i + 1) % nd];
            for (int j = 0; j < nk && valid; ++j) {
                const P2 &k0 = PK[j], &k1 = PK[(j + 1) % nk];
                if (pt_seg_dist2d(d0.x, d0.y, k0, k1) < EPS_NEAR * sc ||
                    pt_seg_dist2d(k0.x, k0.y, d0, d1) < EPS_NEAR * sc) {
                    valid = false;
                    break;
                }
                Hit2D h;
                auto st = cross2d(d0, d1, k0, k1, EPS_NEAR * sc, h);
                if (st == Cross2D::Ambiguous) {
                    valid = false;
                    break;
                }
                if (st == Cross2D::None) continue;
                if (h.s < EPS_PARAM || h.s > 1 - EPS_PARAM ||
                    h.t < EPS_PARAM || h.t > 1 - EPS_PARAM) {
                    valid = false;
                    break;
                }
                double zd = d0.z + h.s * (d1.z - d0.z);
                double zk = k0.z + h.t * (k1.z - k0.z);
                if (std::abs(zd - zk) < EPS_DEPTH * sc) {
                    valid = false;
                    break;
                }
                if (zd < zk) {  // delta passes under the knot arc
                    double ox = k1.x - k0.x, oy = k1.y - k0.y;
                    double ux = d1.x - d0.x, uy = d1.y - d0.y;
                    int sgn = (ox * uy - oy * ux) > 0 ? +1 : -1;
                    evs.push_back({i, h.s, pr.arcs.arc_at(j, h.t), sgn});
                }
            }
        }
        if (valid) {
            std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
                return a.dedge < b.dedge ||
                       (a.dedge == b.dedge && a.s < b.s);
            });
            std::vector<int> word;
            for (const auto& e : evs) word.push_back(e.sign * (e.arc + 1));
            return word;
        }
        // safe re-jitter well below the clearance
        d = delta;
        double mag = clear * std::min(0.2, 1e-3 * std::pow(2.0, attempt));
        for (auto& p : d) p += Vec3{U(rng), U(rng), U(rng)} * mag;
    }
    throw ProjectionDegenerate("loop word: no generic combined projection");
}

bool ComplementModel::word_trivial(const std::vector<int>& word, int k) const {
    const FGroup* G = registry().by_name(homs_[k].group);
    const auto& images = homs_[k].images;
    uint16_t acc = G->identity;
    for (int letter : word) {
        int arc = std::abs(letter) - 1;
        uint16_t g = images[arc];
        if (letter < 0) g = G->inv[g];
        acc = G->mul[acc][g];
    }
    return acc == G->identity;
}

// ---------------------------------------------------------------------------
// certification
// ---------------------------------------------------------------------------
namespace {

bool alpha_inside_ball(const ThetaGraph& th, double margin) {
    Point3 c = (th.a + th.b) * 0.5;
    double r = (th.a - th.b).norm() * 0.5 * (1 + margin);
    for (const auto& p : th.alpha)
        if ((p - c).norm() > r) return false;
    return true;
}

}  // namespace

EssentialityVerdict certify_essential(const ThetaGraph& th,
                                      const ParallelLoop& delta,
                                      const ComplementModel& model,
                                      const ToleranceConfig& tol,
                                      const CertifyOptions& opts) {
    (void)tol;
    if (opts.known_thickness > 0 &&
        (th.a - th.b).norm() < opts.known_thickness &&
        alpha_inside_ball(th, 0.02)) {
        return {VerdictStatus::InessentialCertified,
                "diameter-ball criterion: |a-b| < thickness and the arc stays "
                "in the ball"};
    }
    if (model.signature().is_unknot()) {
        return {VerdictStatus::InessentialCertified,
                "unknotted complement: every arc is inessential"};
    }
    std::vector<int> word = model.loop_word(delta.delta);
    long long expsum = 0;
    for (int w : word) expsum += (w > 0) - (w < 0);
    if (expsum != 0)
        throw ProjectionDegenerate(
            "loop word exponent sum nonzero despite zero linking");
    for (int k = 0; k < model.hom_count(); ++k) {
        if (!model.word_trivial(word, k)) {
            return {VerdictStatus::EssentialCertified,
                    "finite-quotient witness in " + model.hom(k).group +
                        ": loop word maps to a non-identity element"};
        }
    }
    return {VerdictStatus::Inconclusive,
            "no finite-quotient certificate within the time box"};
}

EssentialityVerdict certify_essential(const ThetaGraph& th,
                                      const ParallelLoop& delta,
                                      const ToleranceConfig& tol,
                                      const CertifyOptions& opts) {
    std::vector<Point3> K = th.alpha;
    for (size_t i = th.gamma.size() - 1; i-- > 1;) K.push_back(th.gamma[i]);
    ComplementModel model =
        ComplementModel::build(K, tol, opts.seed, opts.timebox_ms);
    return certify_essential(th, delta, model, tol, opts);
}

EssentialityVerdict secant_essential(const PolygonalKnot& K, const KnotPoint& a,
                                     const KnotPoint& b,
                                     const ComplementModel& model,
                                     const ToleranceConfig& tol,
                                     const CertifyOptions& opts) {
    // ball criterion certifies the secant inessential outright
    if (opts.known_thickness > 0 &&
        (a.point - b.point).norm() < opts.known_thickness) {
        return {VerdictStatus::InessentialCertified,
                "diameter-ball criterion: |a-b| < thickness"};
    }
    if (model.signature().is_unknot()) {
        return {VerdictStatus::InessentialCertified,
                "unknotted complement: every secant is inessential"};
    }
    bool any_inconclusive = false;
    std::string witness;
    for (int dir = 0; dir < 2; ++dir) {
        const KnotPoint& p = dir == 0 ? a : b;
        const KnotPoint& q = dir == 0 ? b : a;
        ThetaGraph th = build_theta(K, p, q, 0.0, tol, opts.seed + dir);
        ParallelLoop dl = parallel_with_zero_linking(th, tol, 0.25,
                                                     opts.seed + 10 * dir);
        EssentialityVerdict v = certify_essential(th, dl, model, tol, opts);
        if (v.status == VerdictStatus::InessentialCertified)
            return {VerdictStatus::InessentialCertified,
                    std::string(dir == 0 ? "arc ab: " : "arc ba: ") + v.witness};
        if (v.status == VerdictStatus::Inconclusive)
            any_inconclusive = true;
        else
            witness += std::string(dir == 0 ? "arc ab: " : "; arc ba: ") +
                       v.witness;
    }
    if (any_inconclusive) return {VerdictStatus::Inconclusive, ""};
    return {VerdictStatus::EssentialCertified, witness};
}

Quadrisecant essential_quadrisecant_check(const PolygonalKnot& K,
                                          const Quadrisecant& q,
                                          const ComplementModel& model,
                                          const ToleranceConfig& tol,
                                          const CertifyOptions& opts) {
    std::vector<std::pair<KnotPoint, KnotPoint>> secants;
    switch (q.dihedral_class) {
        case DihedralClass::Simple:
            secants = {{q.a, q.b}, {q.b, q.c}, {q.c, q.d}};
            break;
        case DihedralClass::Flipped:
            secants = {{q.a, q.b}, {q.c, q.d}};
            break;
        case DihedralClass::Alternating:
            secants = {{q.b, q.c}};
            break;
    }
    Quadrisecant out = q;
    bool all_essential = true, any_refuted = false;
    for (size_t i = 0; i < secants.size(); ++i) {
        CertifyOptions o = opts;
        o.seed = opts.seed + 1000 * (i + 1);
        EssentialityVerdict v =
            secant_essential(K, secants[i].first, secants[i].second, model,
                             tol, o);
        if (v.status == VerdictStatus::InessentialCertified) any_refuted = true;
        if (v.status != VerdictStatus::EssentialCertified) all_essential = false;
    }
    if (any_refuted)
        out.essential = EssentialState::Refuted;
    else if (all_essential)
        out.essential = EssentialState::Certified;
    else
        out.essential = EssentialState::Inconclusive;
    return out;
}

Quadrisecant essential_quadrisecant_check(const PolygonalKnot& K,
                                          const Quadrisecant& q,
                                          const ToleranceConfig& tol,
                                          const CertifyOptions& opts) {
    ComplementModel model =
        ComplementModel::build(K.vertices(), tol, opts.seed, opts.timebox_ms);
    return essential_quadrisecant_check(K, q, model, tol, opts);
}

ShortestEssentialArc shortest_essential_arc(const PolygonalKnot& K,
                                            double resolution,
                                            const ToleranceConfig& tol,
                                            const CertifyOptions& opts) {
    if (resolution <= 0 || resolution > 0.5)
        throw KnotError("resolution must be in (0, 0.5]");
    ComplementModel model =
        ComplementModel::build(K.vertices(), tol, opts.seed, opts.timebox_ms);
    if (model.signature().is_unknot())
        throw NoneCertified("unknot: no essential arcs exist");

    int M = std::max(4, static_cast<int>(std::lround(1.0 / resolution)));
    double L = K.total_length();
    std::vector<KnotPoint> grid;
    for (int i = 0; i < M; ++i) {
        double s = L * i / M;
        // locate edge containing arclength s
        int e = 0;
        while (e + 1 < K.size() && K.cum_length(e + 1) <= s) ++e;
        double t = (s - K.cum_length(e)) / K.edge_length(e);
        grid.push_back(KnotPoint::on(K, e, std::min(t, 1.0 - 1e-9)));
    }
    struct Cand {
        int i, j;
        double len;
    };
    std::vector<Cand> cands;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            if (i == j) continue;
            if (common_straight_subarc(K, grid[i], grid[j], tol)) continue;
            cands.push_back({i, j, arc_length(K, grid[i], grid[j])});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return a.len < b.len || (a.len == b.len && (a.i < b.i));
    });
    for (const auto& c : cands) {
        try {
            ThetaGraph th =
                build_theta(K, grid[c.i], grid[c.j], 0.0, tol, opts.seed);
            ParallelLoop dl =
                parallel_with_zero_linking(th, tol, 0.25, opts.seed);
            EssentialityVerdict v = certify_essential(th, dl, model, tol, opts);
            if (v.status == VerdictStatus::EssentialCertified) {
                ShortestEssentialArc out;
                out.arc = {grid[c.i], grid[c.j]};
                out.length = c.len;
                out.verdict = v;
                // diagnostic: look for a sampled trisecant hugging the arc ends
                try {
                    auto fams = trisecant_families(K, tol);
                    double w = 2 * resolution * L;
                    double s0 = arc_position(K, grid[c.i]);
                    double s1 = arc_position(K, grid[c.j]);
                    auto near_pos = [&](double x, double y) {
                        double d = std::abs(x - y);
                        return std::min(d, L - d) < w;
                    };
                    for (const auto& f : fams)
                        for (const auto& t : f.samples) {
                            double pa = arc_position(K, t.a);
                            double pc = arc_position(K, t.c);
                            if ((near_pos(pa, s0) && near_pos(pc, s1)) ||
                                (near_pos(pc, s0) && near_pos(pa, s1))) {
                                out.near_trisecant_witness = true;
                                break;
                            }
                        }
                } catch (const KnotError&) {
                }
                return out;
            }
        } catch (const KnotError&) {
            continue;  // unbuildable theta/parallel for this pair; keep going
        }
    }
    throw NoneCertified("no arc certified essential at this resolution");
}

}  // namespace knotsec
