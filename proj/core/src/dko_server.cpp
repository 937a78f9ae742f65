#include "disco/dko_server.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

std::optional<std::size_t> matchToken(const IdentityToken& token, const DynamicCache& cache) {
    if (!(norm2(token.vector) > 0.0)) throw DegenerateInputError("cannot match a zero-norm token");
    std::optional<std::size_t> best;
    double bestSimilarity = 0.0;
    for (std::size_t i = 0; i < cache.entries.size(); ++i) {
        const double s = cosine(token.vector, cache.entries[i].globalToken.vector);
        if (s < cache.threshold) continue;
        // Strict comparison: on an exact tie the earlier entry wins.
        if (!best || s > bestSimilarity) {
            best = i;
            bestSimilarity = s;
        }
    }
    return best;
}

std::vector<std::vector<std::size_t>> groupMismatched(std::span<const ClientUpdate> locals,
                                                      double threshold) {
    std::vector<std::size_t> order(locals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return locals[a].clientId < locals[b].clientId;
    });

    struct Group {
        Vector representative;
        double weight = 0.0;
        std::vector<std::size_t> members;
    };
    std::vector<Group> groups;

    for (std::size_t idx : order) {
        const auto& u = locals[idx];
        const double n = static_cast<double>(u.sampleCount);
        auto joined = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return cosine(g.representative, u.localToken.vector) >= threshold;
        });
        if (joined == groups.end()) {
            groups.push_back(Group{u.localToken.vector, n, {idx}});
            continue;
        }
        const double total = joined->weight + n;
        for (std::size_t i = 0; i < joined->representative.size(); ++i) {
            joined->representative[i] =
                (joined->weight * joined->representative[i] + n * u.localToken.vector[i]) / total;
        }
        joined->weight = total;
        joined->members.push_back(idx);
    }

    std::vector<std::vector<std::size_t>> out;
    out.reserve(groups.size());
    for (auto& g : groups) out.push_back(std::move(g.members));
    return out;
}

std::vector<std::vector<ClientUpdate>> pairMismatched(std::span<const ClientUpdate> locals,
                                                      double threshold) {
    std::vector<std::vector<ClientUpdate>> out;
    for (const auto& group : groupMismatched(locals, threshold)) {
        auto& g = out.emplace_back();
        for (std::size_t i : group) g.push_back(locals[i]);
    }
    return out;
}

IdentityToken mergeGlobalToken(const SubspaceEntry* entry, std::span<const ClientUpdate> locals) {
    if (locals.empty()) throw Error("mergeGlobalToken needs at least one local token");
    const std::size_t dim = locals.front().localToken.vector.size();
    Vector sum(dim, 0.0);
    std::size_t count = 0;
    if (entry != nullptr) {
        const auto& z = entry->globalToken;
        if (z.vector.size() != dim) throw ShapeError("global and local token lengths differ");
        const double n = static_cast<double>(z.supportCount);
        for (std::size_t i = 0; i < dim; ++i) sum[i] = n * z.vector[i];
        count = z.supportCount;
    }
    for (const auto& u : locals) {
        if (u.localToken.vector.size() != dim) throw ShapeError("local token lengths differ");
        const double n = static_cast<double>(u.sampleCount);
        for (std::size_t i = 0; i < dim; ++i) sum[i] += n * u.localToken.vector[i];
        count += u.sampleCount;
    }
    const double total = static_cast<double>(count);
    for (double& v : sum) v /= total;
    return IdentityToken{std::move(sum), count};
}

namespace {

void validateUpdate(const ClientUpdate& u) {
    if (u.sampleCount == 0) {
        throw Error(fmt::format("update from client {} has no samples", u.clientId));
    }
    if (u.sampleCount != u.localToken.supportCount) {
        throw Error(fmt::format("client {}: sample count {} differs from token support {}",
                                u.clientId, u.sampleCount, u.localToken.supportCount));
    }
}

struct GroupPayload {
    std::vector<LowRankAdapter> adapters;
    std::vector<double> weights;
    std::vector<ClientUpdate> tokens;
};

GroupPayload collect(std::span<const ClientUpdate> updates, const std::vector<std::size_t>& idx) {
    GroupPayload p;
    for (std::size_t i : idx) {
        const auto& u = updates[i];
        p.adapters.push_back(u.adapter);
        p.weights.push_back(static_cast<double>(u.sampleCount));
        // Only the token and count reach the merge.
        ClientUpdate t;
        t.localToken = u.localToken;
        t.sampleCount = u.sampleCount;
        p.tokens.push_back(std::move(t));
    }
    return p;
}

}  // namespace

RoundOutcome aggregateRound(std::span<const ClientUpdate> updates, const DynamicCache& cache,
                            const AggregatorSpec& aggregator, std::size_t stage) {
    RoundOutcome out{cache, std::vector<std::size_t>(updates.size()), 0};
    if (updates.empty()) return out;
    for (const auto& u : updates) validateUpdate(u);

    std::vector<std::vector<std::size_t>> matched(cache.entries.size());
    std::vector<std::size_t> unmatched;
    for (std::size_t i = 0; i < updates.size(); ++i) {
        if (auto slot = matchToken(updates[i].localToken, cache)) {
            matched[*slot].push_back(i);
        } else {
            unmatched.push_back(i);
        }
    }

    for (std::size_t e = 0; e < matched.size(); ++e) {
        if (matched[e].empty()) continue;
        auto& entry = out.cache.entries[e];
        const GroupPayload p = collect(updates, matched[e]);
        auto step = fedOpt(entry.adapter, p.adapters, p.weights, aggregator, entry.optimizerState);
        entry.globalToken = mergeGlobalToken(&entry, p.tokens);
        entry.adapter = std::move(step.adapter);
        entry.optimizerState = std::move(step.state);
        for (std::size_t i : matched[e]) out.assignment[i] = e;
    }

    std::vector<ClientUpdate> pending;
    pending.reserve(unmatched.size());
    for (std::size_t i : unmatched) pending.push_back(updates[i]);
    for (const auto& group : groupMismatched(pending, cache.threshold)) {
        std::vector<std::size_t> idx;
        for (std::size_t g : group) idx.push_back(unmatched[g]);
        const GroupPayload p = collect(updates, idx);
        SubspaceEntry entry;
        entry.adapter = fedAvg(p.adapters, p.weights);
        entry.globalToken = mergeGlobalToken(nullptr, p.tokens);
        entry.createdAtStage = stage;
        entry.optimizerState = AggregatorState::zerosLike(entry.adapter);
        const std::size_t slot = out.cache.entries.size();
        out.cache.entries.push_back(std::move(entry));
        for (std::size_t i : idx) out.assignment[i] = slot;
        ++out.createdEntries;
    }
    return out;
}

DynamicCache serverRound(std::span<const ClientUpdate> updates, const DynamicCache& cache,
                         const AggregatorSpec& aggregator, std::size_t stage) {
    return aggregateRound(updates, cache, aggregator, stage).cache;
}

SubspaceChoice selectClientSubspace(const DynamicCache& cache, const IdentityToken& localToken) {
    if (auto slot = matchToken(localToken, cache)) return *slot;
    return FreshAdapter{};
}

}  // namespace disco
