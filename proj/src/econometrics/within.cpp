#include "expectq/econometrics.hpp"

#include "expectq/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace expectq {

namespace {

struct GroupIndex {
    const std::vector<int>* ids;
    std::vector<double> counts;
};

// Subtracts group means in place; returns the largest absolute adjustment.
double demean_once(double* col, Eigen::Index n, const GroupIndex& g, std::vector<double>& sums) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) sums[static_cast<std::size_t>((*g.ids)[static_cast<std::size_t>(i)])] += col[i];
    for (std::size_t k = 0; k < sums.size(); ++k) sums[k] /= g.counts[k];
    double change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = sums[static_cast<std::size_t>((*g.ids)[static_cast<std::size_t>(i)])];
        col[i] -= m;
        change = std::max(change, std::abs(m));
    }
    return change;
}

}  // namespace

WithinResult within_transform(Eigen::MatrixXd data, std::span<const std::vector<int>> groups,
                              const WithinOptions& options) {
    WithinResult out;
    const Eigen::Index n = data.rows();
    out.singleton.assign(static_cast<std::size_t>(n), false);

    std::vector<GroupIndex> index;
    for (const auto& ids : groups) {
        if (ids.size() != static_cast<std::size_t>(n))
            throw Error(Errc::InvalidArgument, "within_transform: group vector length mismatch");
        int max_id = -1;
        for (int id : ids) {
            if (id < 0) throw Error(Errc::InvalidArgument, "within_transform: negative group id");
            max_id = std::max(max_id, id);
        }
        GroupIndex g{&ids, std::vector<double>(static_cast<std::size_t>(max_id + 1), 0.0)};
        for (int id : ids) g.counts[static_cast<std::size_t>(id)] += 1.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (g.counts[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] == 1.0)
                out.singleton[static_cast<std::size_t>(i)] = true;
        index.push_back(std::move(g));
    }
    if (index.empty() || n == 0) {
        out.data = std::move(data);
        return out;
    }

    std::vector<std::vector<double>> sums;
    for (const auto& g : index) sums.emplace_back(g.counts.size(), 0.0);

    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        double* col = data.col(c).data();
        int sweeps = 0;
        double change = 0.0;
        do {
            if (sweeps == options.max_sweeps)
                throw Error(Errc::NoConvergence,
                            fmt::format("within transform did not converge after {} sweeps (last change {:g})",
                                        sweeps, change));
            change = 0.0;
            for (std::size_t d = 0; d < index.size(); ++d)
                change = std::max(change, demean_once(col, n, index[d], sums[d]));
            ++sweeps;
        } while (index.size() > 1 && change > options.tolerance);
        out.sweeps = std::max(out.sweeps, sweeps);
    }

    for (std::size_t d = 0; d < index.size(); ++d) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            auto& s = sums[d];
            std::fill(s.begin(), s.end(), 0.0);
            for (Eigen::Index i = 0; i < n; ++i)
                s[static_cast<std::size_t>((*index[d].ids)[static_cast<std::size_t>(i)])] += data(i, c);
            for (std::size_t k = 0; k < s.size(); ++k)
                out.max_group_mean = std::max(out.max_group_mean, std::abs(s[k] / index[d].counts[k]));
        }
    }
    out.data = std::move(data);
    return out;
}

}  // namespace expectq
