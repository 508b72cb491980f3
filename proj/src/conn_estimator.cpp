#include "ncx/conn_estimator.hpp"

#include "ncx/error.hpp"
#include "ncx/parallel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace ncx {

std::string_view to_string(WalkMode mode) noexcept {
    return mode == WalkMode::pruned ? "pruned" : "unpruned";
}

double ConnEstimate::standard_error() const {
    return theta == 0 ? 0.0 : std::sqrt(sample_variance / theta);
}

WalkOutcome single_walk(const KnowledgeGraph& g, const HopOracle& hops, std::span<const InstanceId> sources,
                        InstanceId target, const ConnParams& p, Rng& rng, WalkMode mode) {
    assert(!sources.empty());
    const std::shared_ptr<const HopMap> reach =
        mode == WalkMode::pruned ? hops.map_for(target) : std::shared_ptr<const HopMap>{};

    WalkOutcome out;
    InstanceId current = sources[uniform_index(rng, sources.size())];
    assert(current != target);

    // At most tau + 1 nodes; a linear scan beats any set here.
    std::vector<InstanceId> visited{current};
    visited.reserve(p.tau + 1);

    std::uint32_t l = 1;
    while (l <= p.tau) {
        std::size_t count = 0;
        InstanceId next{};
        const HopCount budget = p.tau - l;
        for (InstanceId n : g.neighbors(current)) {
            if (std::find(visited.begin(), visited.end(), n) != visited.end())
                continue;
            if (reach && reach->hop(n) > budget)
                continue;
            ++count;
            // Reservoir of size one: keep n with probability 1/count.
            if (uniform_index(rng, count) == 0)
                next = n;
        }
        if (count == 0) {
            out.nodes_sampled = l;
            return out;
        }
        out.inverse_probability *= static_cast<double>(count);
        ++l;
        current = next;
        visited.push_back(current);
        if (current == target)
            break;
    }
    out.nodes_sampled = l;
    if (current == target) {
        out.success = true;
        out.contribution = std::pow(p.beta, static_cast<double>(l - 1)) * out.inverse_probability;
    }
    return out;
}

ConnEstimate estimate_conn(const KnowledgeGraph& g, const HopOracle& hops, std::span<const InstanceId> sources,
                           std::span<const InstanceId> context, const ConnParams& p, std::uint32_t theta,
                           std::uint64_t seed, WalkMode mode) {
    p.validate();
    if (sources.empty())
        throw Error(ErrorKind::invalid_argument, "concept has no instances to start walks from");
    if (context.empty())
        throw Error(ErrorKind::invalid_argument, "context set is empty");
    if (theta == 0)
        throw Error(ErrorKind::invalid_argument, "theta must be >= 1");
    if (mode == WalkMode::pruned && hops.radius() + 1 < p.tau)
        throw Error(ErrorKind::invalid_argument, "hop oracle radius is smaller than tau - 1");

    std::vector<double> contributions(theta);
    parallel_for(theta, [&](std::size_t j) {
        Rng rng = substream(seed, j);
        const InstanceId target = context[uniform_index(rng, context.size())];
        contributions[j] = single_walk(g, hops, sources, target, p, rng, mode).contribution;
    });

    const double scale = static_cast<double>(sources.size());
    ConnEstimate est;
    est.theta = theta;
    est.seed = seed;
    double sum = 0.0;
    for (double c : contributions) {
        sum += c * scale;
        if (c > 0.0)
            ++est.success_count;
    }
    est.mean = sum / theta;
    if (theta > 1) {
        double ss = 0.0;
        for (double c : contributions) {
            const double d = c * scale - est.mean;
            ss += d * d;
        }
        est.sample_variance = ss / (theta - 1);
    }
    return est;
}

ConnEstimate estimate_conn(const KnowledgeGraph& g, const HopOracle& hops, ConceptId c,
                           std::span<const InstanceId> context, const ConnParams& p, std::uint32_t theta,
                           std::uint64_t seed, WalkMode mode) {
    return estimate_conn(g, hops, g.instances_of(c), context, p, theta, seed, mode);
}

ErrorProfile estimator_error_profile(const KnowledgeGraph& g, std::span<const ConnPair> pairs, const ConnParams& p,
                                     std::span<const std::uint32_t> theta_grid, std::uint32_t repeats,
                                     std::uint64_t seed, std::span<const WalkMode> modes) {
    p.validate();
    ErrorProfile profile;
    std::vector<std::size_t> usable;
    std::vector<double> exact(pairs.size(), 0.0);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        exact[i] = exact_conn(g, pairs[i].sources, pairs[i].context, p);
        if (exact[i] > 0.0)
            usable.push_back(i);
        else
            profile.excluded.push_back(pairs[i].label);
    }

    HopCache hops(g, p.tau);
    auto normalized = [](double conn) { return conn / (1.0 + conn); };
    for (std::uint32_t theta : theta_grid) {
        for (WalkMode mode : modes) {
            std::vector<double> errors;
            double cdr_error_sum = 0.0;
            for (std::size_t i : usable) {
                for (std::uint32_t r = 0; r < repeats; ++r) {
                    const auto run_seed = substream_seed(substream_seed(seed, i),
                                                         (static_cast<std::uint64_t>(theta) << 32) | r);
                    const auto est =
                        estimate_conn(g, hops, pairs[i].sources, pairs[i].context, p, theta, run_seed, mode);
                    errors.push_back(std::abs(est.mean - exact[i]) / exact[i]);
                    cdr_error_sum +=
                        std::abs(normalized(est.mean) - normalized(exact[i])) / normalized(exact[i]);
                }
            }
            ErrorProfileRow row;
            row.theta = theta;
            row.mode = mode;
            row.samples = errors.size();
            if (!errors.empty()) {
                double sum = 0.0;
                for (double e : errors) sum += e;
                row.mean_relative_error = sum / errors.size();
                row.mean_relative_error_cdr_c = cdr_error_sum / errors.size();
                if (errors.size() > 1) {
                    double ss = 0.0;
                    for (double e : errors) ss += (e - row.mean_relative_error) * (e - row.mean_relative_error);
                    row.ci95 = 1.96 * std::sqrt(ss / (errors.size() - 1) / errors.size());
                }
            }
            profile.rows.push_back(row);
        }
    }
    return profile;
}

} // namespace ncx
