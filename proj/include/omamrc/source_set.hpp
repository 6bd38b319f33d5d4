#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace omamrc {

/// Upper bound on the number of sources; subsets are stored as a 32-bit mask
/// but every search in this library is exponential in the source count.
inline constexpr int kMaxSources = 16;

/// A set of source indices in [0, kMaxSources).
class SourceSet {
public:
    using mask_type = std::uint32_t;

    constexpr SourceSet() = default;

    static constexpr SourceSet from_mask(mask_type mask) { return SourceSet(mask); }

    /// {0, ..., count-1}
    static constexpr SourceSet all(int count)
    {
        assert(count >= 0 && count <= kMaxSources);
        return SourceSet(count == 0 ? 0u : (~mask_type{0} >> (32 - count)));
    }

    static constexpr SourceSet single(int s) { return SourceSet(mask_type{1} << s); }

    static constexpr SourceSet of(std::initializer_list<int> members)
    {
        SourceSet set;
        for (int s : members) {
            set.insert(s);
        }
        return set;
    }

    constexpr mask_type mask() const { return mask_; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr int size() const { return std::popcount(mask_); }

    constexpr bool contains(int s) const { return ((mask_ >> s) & 1u) != 0; }
    constexpr bool intersects(SourceSet other) const { return (mask_ & other.mask_) != 0; }
    constexpr bool is_subset_of(SourceSet other) const { return (mask_ & ~other.mask_) == 0; }

    constexpr void insert(int s)
    {
        assert(s >= 0 && s < kMaxSources);
        mask_ |= mask_type{1} << s;
    }
    constexpr void erase(int s) { mask_ &= ~(mask_type{1} << s); }

    friend constexpr SourceSet operator&(SourceSet a, SourceSet b) { return SourceSet(a.mask_ & b.mask_); }
    friend constexpr SourceSet operator|(SourceSet a, SourceSet b) { return SourceSet(a.mask_ | b.mask_); }
    /// Set difference.
    friend constexpr SourceSet operator-(SourceSet a, SourceSet b) { return SourceSet(a.mask_ & ~b.mask_); }
    SourceSet& operator|=(SourceSet other)
    {
        mask_ |= other.mask_;
        return *this;
    }

    friend constexpr bool operator==(SourceSet, SourceSet) = default;

    /// Members in ascending order.
    std::vector<int> members() const
    {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (mask_type m = mask_; m != 0; m &= m - 1) {
            out.push_back(std::countr_zero(m));
        }
        return out;
    }

    /// "{s1,s3}" with 1-based labels, matching the CLI link naming.
    std::string to_string() const
    {
        std::string out = "{";
        bool first = true;
        for (int s : members()) {
            if (!first) {
                out += ',';
            }
            out += 's' + std::to_string(s + 1);
            first = false;
        }
        return out + '}';
    }

private:
    constexpr explicit SourceSet(mask_type mask) : mask_(mask) {}

    mask_type mask_ = 0;
};

/// Calls f(subset) for every non-empty subset of `pool`. Order is by mask,
/// which is the order the outage predicates use; callers must not depend on
/// it for tie-breaking. Stops early and returns true when f returns true.
template <class F>
constexpr bool any_nonempty_subset(SourceSet pool, F&& f)
{
    const auto full = pool.mask();
    for (auto sub = full; sub != 0; sub = (sub - 1) & full) {
        if (f(SourceSet::from_mask(sub))) {
            return true;
        }
    }
    return false;
}

/// Visits the `k`-element subsets of `pool` in lexicographic order of their
/// ascending member lists ({0,1} < {0,2} < {1,2}). Returns the first subset
/// for which `pred` holds, or an empty set.
template <class Pred>
SourceSet first_subset_of_size(SourceSet pool, int k, Pred&& pred)
{
    const std::vector<int> items = pool.members();
    const int n = static_cast<int>(items.size());
    if (k <= 0 || k > n) {
        return {};
    }
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        pick[static_cast<std::size_t>(i)] = i;
    }
    while (true) {
        SourceSet candidate;
        for (int idx : pick) {
            candidate.insert(items[static_cast<std::size_t>(idx)]);
        }
        if (pred(candidate)) {
            return candidate;
        }
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) {
            --i;
        }
        if (i < 0) {
            return {};
        }
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

enum class NodeKind : std::uint8_t { source, relay, destination };

/// A node of the network. Ordering is sources by index, then relays by
/// index, then the destination; every deterministic tie-break uses it.
struct NodeId {
    NodeKind kind = NodeKind::source;
    int index = 0;

    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;

    constexpr bool is_source() const { return kind == NodeKind::source; }
    constexpr bool is_relay() const { return kind == NodeKind::relay; }
    constexpr bool is_destination() const { return kind == NodeKind::destination; }

    std::string to_string() const
    {
        switch (kind) {
        case NodeKind::source:
            return "s" + std::to_string(index + 1);
        case NodeKind::relay:
            return "r" + std::to_string(index + 1);
        case NodeKind::destination:
            return "d";
        }
        return "?";
    }
};

constexpr NodeId source_node(int s) { return {NodeKind::source, s}; }
constexpr NodeId relay_node(int r) { return {NodeKind::relay, r}; }
constexpr NodeId destination_node() { return {NodeKind::destination, 0}; }

/// Position of a transmitting node (source or relay) in node order.
constexpr int node_ordinal(NodeId node, int sources)
{
    assert(!node.is_destination());
    return node.is_source() ? node.index : sources + node.index;
}

constexpr NodeId node_at(int ordinal, int sources)
{
    return ordinal < sources ? source_node(ordinal) : relay_node(ordinal - sources);
}

} // namespace omamrc
