#pragma once

// Reference implementations used as test oracles. Plain vectors and long
// double arithmetic, no library code.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;  // row-major

/// Gaussian elimination with partial pivoting.
inline Vec solve(Mat a, Vec b) {
    const std::size_t n = a.size();
    std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
        m[i][n] = b[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
        if (std::fabs(m[piv][c]) < 1e-300L) throw std::runtime_error("singular system");
        std::swap(m[c], m[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const long double f = m[r][c] / m[c][c];
            if (f == 0.0L) continue;
            for (std::size_t k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(m[i][n] / m[i][i]);
    return x;
}

inline Mat inverse(const Mat& a) {
    const std::size_t n = a.size();
    Mat inv(n, Vec(n));
    for (std::size_t j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        auto col = solve(a, e);
        for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

inline Mat gram(const Mat& x) {
    const std::size_t k = x.empty() ? 0 : x[0].size();
    Mat g(k, Vec(k, 0.0));
    for (const auto& row : x)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) g[i][j] += row[i] * row[j];
    return g;
}

inline Vec xty(const Mat& x, const Vec& y) {
    const std::size_t k = x.empty() ? 0 : x[0].size();
    Vec v(k, 0.0);
    for (std::size_t r = 0; r < x.size(); ++r)
        for (std::size_t i = 0; i < k; ++i) v[i] += x[r][i] * y[r];
    return v;
}

/// Least squares through the normal equations.
inline Vec ols(const Mat& x, const Vec& y) { return solve(gram(x), xty(x, y)); }

/// OLS with explicit dummies: one column per level of the first grouping,
/// levels 2.. of every other grouping. Returns the coefficients on `x`.
inline Vec dummy_ols(const Mat& x, const Vec& y, const std::vector<std::vector<int>>& groups) {
    Mat full;
    std::vector<std::vector<int>> levels;
    for (const auto& g : groups) {
        std::set<int> s(g.begin(), g.end());
        levels.emplace_back(s.begin(), s.end());
    }
    for (std::size_t r = 0; r < x.size(); ++r) {
        Vec row = x[r];
        for (std::size_t d = 0; d < groups.size(); ++d) {
            for (std::size_t l = (d == 0 ? 0 : 1); l < levels[d].size(); ++l)
                row.push_back(groups[d][r] == levels[d][l] ? 1.0 : 0.0);
        }
        if (groups.empty()) row.push_back(1.0);
        full.push_back(std::move(row));
    }
    auto b = ols(full, y);
    b.resize(x.empty() ? 0 : x[0].size());
    return b;
}

/// Residuals of y on the dummy design plus x.
inline Vec dummy_residuals(const Mat& x, const Vec& y, const std::vector<std::vector<int>>& groups) {
    Mat full;
    std::vector<std::vector<int>> levels;
    for (const auto& g : groups) {
        std::set<int> s(g.begin(), g.end());
        levels.emplace_back(s.begin(), s.end());
    }
    for (std::size_t r = 0; r < y.size(); ++r) {
        Vec row = x.empty() ? Vec{} : x[r];
        for (std::size_t d = 0; d < groups.size(); ++d)
            for (std::size_t l = (d == 0 ? 0 : 1); l < levels[d].size(); ++l)
                row.push_back(groups[d][r] == levels[d][l] ? 1.0 : 0.0);
        full.push_back(std::move(row));
    }
    const auto b = ols(full, y);
    Vec u(y.size());
    for (std::size_t r = 0; r < y.size(); ++r) {
        long double fit = 0;
        for (std::size_t i = 0; i < b.size(); ++i) fit += full[r][i] * b[i];
        u[r] = static_cast<double>(y[r] - fit);
    }
    return u;
}

/// Cluster-robust sandwich with the G/(G-1)(N-1)/(N-K) factor.
inline Mat cluster_sandwich(const Mat& x, const Vec& u, const std::vector<int>& cluster, std::size_t k_dof) {
    const std::size_t k = x[0].size();
    const auto bread = inverse(gram(x));
    std::map<int, Vec> score;
    for (std::size_t r = 0; r < x.size(); ++r) {
        auto& s = score[cluster[r]];
        s.resize(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) s[i] += x[r][i] * u[r];
    }
    Mat meat(k, Vec(k, 0.0));
    for (const auto& [_, s] : score)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) meat[i][j] += s[i] * s[j];
    const double g = static_cast<double>(score.size());
    const double n = static_cast<double>(x.size());
    const double factor = g / (g - 1.0) * (n - 1.0) / (n - static_cast<double>(k_dof));
    Mat v(k, Vec(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            long double acc = 0;
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) acc += bread[i][a] * meat[a][b] * bread[b][j];
            v[i][j] = static_cast<double>(acc) * factor;
        }
    return v;
}

/// HC1-style heteroskedasticity-robust variance without the small-sample factor.
inline Mat hc0(const Mat& x, const Vec& u) {
    std::vector<int> ids(x.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    const std::size_t k = x[0].size();
    const auto bread = inverse(gram(x));
    Mat meat(k, Vec(k, 0.0));
    for (std::size_t r = 0; r < x.size(); ++r)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) meat[i][j] += x[r][i] * x[r][j] * u[r] * u[r];
    Mat v(k, Vec(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) v[i][j] += bread[i][a] * meat[a][b] * bread[b][j];
    return v;
}

// ---------------------------------------------------------------------------
// Text
// ---------------------------------------------------------------------------

inline bool ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

/// Whitespace-separated tokens of an ASCII text.
inline std::vector<std::string> words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (ascii_space(c)) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct Split {
    std::string lead, core, trail;
};

inline Split split_punct(const std::string& tok) {
    std::size_t b = 0, e = tok.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
    return {tok.substr(0, b), tok.substr(b, e - b), tok.substr(e)};
}

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

/// Token-rule masking of an ASCII text: years in [lo, hi], month names and
/// entity sequences (longest first at each position).
inline std::string mask(const std::string& text, int lo, int hi, const std::set<std::string>& months,
                        std::vector<std::vector<std::string>> entities, const std::string& token) {
    std::sort(entities.begin(), entities.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    // tokens with their separators
    std::vector<std::string> seps, toks;
    std::string cur, sep;
    for (char c : text) {
        if (ascii_space(c)) {
            if (!cur.empty()) {
                toks.push_back(cur);
                cur.clear();
            }
            sep.push_back(c);
        } else {
            if (cur.empty()) {
                seps.push_back(sep);
                sep.clear();
            }
            cur.push_back(c);
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    std::vector<Split> parts;
    for (const auto& t : toks) parts.push_back(split_punct(t));
    std::vector<bool> hit(toks.size(), false);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto core = lower(parts[i].core);
        if (core.empty()) continue;
        bool year = core.size() == 4 && std::all_of(core.begin(), core.end(), [](char c) { return c >= '0' && c <= '9'; });
        if (year) {
            const int v = std::stoi(core);
            if (v >= lo && v <= hi) {
                hit[i] = true;
                continue;
            }
        }
        if (months.count(core)) {
            hit[i] = true;
            continue;
        }
        for (const auto& ent : entities) {
            if (i + ent.size() > toks.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < ent.size() && ok; ++k) ok = lower(parts[i + k].core) == ent[k];
            if (ok) {
                for (std::size_t k = 0; k < ent.size(); ++k) hit[i + k] = true;
                break;
            }
        }
    }
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        out += seps[i];
        if (hit[i]) out += parts[i].lead + token + parts[i].trail;
        else out += toks[i];
    }
    out += sep;
    return out;
}

}  // namespace oracle
