#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "disco/aggregators.hpp"
#include "disco/identity.hpp"
#include "disco/lowrank.hpp"

namespace disco {

using ClientId = std::uint32_t;

/// One task-specific subspace held by the server.
struct SubspaceEntry {
    LowRankAdapter adapter;
    IdentityToken globalToken;
    std::size_t createdAtStage = 0;
    AggregatorState optimizerState;

    friend bool operator==(const SubspaceEntry&, const SubspaceEntry&) = default;
};

/// Server-side collection of subspaces. Entries are kept in creation order
/// and are never removed or reordered.
struct DynamicCache {
    std::vector<SubspaceEntry> entries;
    double threshold = 0.9;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }

    friend bool operator==(const DynamicCache&, const DynamicCache&) = default;
};

/// The only payload a client sends to the server. It deliberately carries no
/// task label: routing happens through localToken alone.
struct ClientUpdate {
    LowRankAdapter adapter;
    IdentityToken localToken;
    std::size_t sampleCount = 0;
    ClientId clientId = 0;
    /// Cache slot the client started from; informational, never read by the server.
    std::optional<std::size_t> trainedSlot;
};

/// Index of the entry with the highest cosine to `token` among entries at or
/// above `cache.threshold`; ties go to the lower index. Throws
/// DegenerateInputError for a zero-norm token.
std::optional<std::size_t> matchToken(const IdentityToken& token, const DynamicCache& cache);

/// Greedy grouping of updates that matched no entry.
///
/// Updates are visited in clientId order. Each joins the first group whose
/// representative (the running sample-weighted mean of its members' tokens)
/// has cosine >= threshold, otherwise it founds a new group. Returned groups
/// hold indices into `locals`, in group-creation order.
std::vector<std::vector<std::size_t>> groupMismatched(std::span<const ClientUpdate> locals,
                                                      double threshold);

/// Same grouping as groupMismatched, materialized as updates.
std::vector<std::vector<ClientUpdate>> pairMismatched(std::span<const ClientUpdate> locals,
                                                      double threshold);

/// Sample-weighted merge of local tokens into an existing global token, or
/// a new token when `entry` is empty. Operates on unnormalized vectors.
IdentityToken mergeGlobalToken(const SubspaceEntry* entry, std::span<const ClientUpdate> locals);

/// Where each update of a round ended up.
struct RoundOutcome {
    DynamicCache cache;
    /// assignment[i] is the entry index that updates[i] was aggregated into.
    std::vector<std::size_t> assignment;
    std::size_t createdEntries = 0;
};

/// One round of Dynamic Knowledge Organization.
///
/// Matched updates are aggregated into their entry with `aggregator`
/// (adaptive state lives per entry); unmatched updates are grouped and each
/// group becomes a new entry combined by plain sample-weighted averaging.
/// Entries without a matching update are left untouched.
RoundOutcome aggregateRound(std::span<const ClientUpdate> updates, const DynamicCache& cache,
                            const AggregatorSpec& aggregator, std::size_t stage = 0);

/// aggregateRound without the per-update assignment.
DynamicCache serverRound(std::span<const ClientUpdate> updates, const DynamicCache& cache,
                         const AggregatorSpec& aggregator, std::size_t stage = 0);

/// Client-side instruction to start from a freshly initialized adapter.
struct FreshAdapter {};

using SubspaceChoice = std::variant<std::size_t, FreshAdapter>;

/// Which cache slot a client should train, or a fresh adapter if none matches.
SubspaceChoice selectClientSubspace(const DynamicCache& cache, const IdentityToken& localToken);

}  // namespace disco
