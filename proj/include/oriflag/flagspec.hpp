#pragma once

#include "oriflag/orthogonal.hpp"
#include "oriflag/pi_expr.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oriflag {

/// An ordered partition (lambda_1, ..., lambda_k) of n. Order is significant:
/// (1,2) and (2,1) name different flag manifolds.
class OrderedPartition {
public:
    explicit OrderedPartition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int n() const { return n_; }
    int size() const { return static_cast<int>(parts_.size()); }

    // Flag signature d_m = lambda_1 + ... + lambda_m, strictly increasing, last entry n.
    std::vector<int> signature() const;
    bool all_ones() const;

    friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;

private:
    std::vector<int> parts_;
    int n_ = 0;
};

enum class PartitionKind { Trivial, Complete, Proper };

/// A set partition of the index set {1, ..., k}. Indices are 1-based.
///
/// Stored canonically: each block sorted ascending, blocks ordered by their
/// smallest element. A single block over k = 1 reports Trivial.
class SetPartition {
public:
    SetPartition(std::vector<std::vector<int>> blocks, int k);

    static SetPartition trivial(int k);
    static SetPartition complete(int k);

    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    int k() const { return k_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }

    bool is_trivial() const { return blocks_.size() == 1; }
    bool is_complete() const { return static_cast<int>(blocks_.size()) == k_; }
    PartitionKind kind() const;

    // Block containing index i (1-based) as a position into blocks().
    int block_of(int index) const;

    // True when every block of *this lies inside some block of coarser.
    bool refines(const SetPartition& coarser) const;

    friend bool operator==(const SetPartition&, const SetPartition&) = default;

private:
    std::vector<std::vector<int>> blocks_;
    int k_ = 0;
};

/// Names the manifold Fl(lambda; P) = SO(n) / SG_lambda^P.
class FlagSpec {
public:
    FlagSpec(OrderedPartition lambda, SetPartition p);

    const OrderedPartition& lambda() const { return lambda_; }
    const SetPartition& p() const { return p_; }
    int n() const { return lambda_.n(); }

    // Applies a permutation sigma of {1..k} (0-based images): part i moves to sigma[i],
    // and block indices are relabelled the same way.
    FlagSpec permuted(std::span<const int> sigma) const;

    // "lambda=1,1,1 P={1}{2,3}"
    static FlagSpec parse(std::string_view text);
    std::string to_string() const;

    // {"lambda":[1,1,1],"P":[[1],[2,3]]}
    static FlagSpec from_json(std::string_view json_text);
    std::string to_json() const;

    friend bool operator==(const FlagSpec&, const FlagSpec&) = default;

private:
    OrderedPartition lambda_;
    SetPartition p_;
};

// Parses "1,2,3" into {1,2,3}.
std::vector<int> parse_int_list(std::string_view text);
// Parses "{1}{2,3}" as a partition of {1..k}.
SetPartition parse_set_partition(std::string_view text, int k);

/// The finite subgroup SG_lambda^P of SO(n) for lambda = (1,...,1).
struct FiniteIsotropy {
    std::vector<Rotation> elements;
    int order() const { return static_cast<int>(elements.size()); }
    int dimension() const { return elements.empty() ? 0 : elements.front().dim(); }
};

/// Conjugate (transposed Young diagram) of a partition. Input order is free;
/// parts are sorted descending first. Output is descending.
std::vector<int> conjugate_partition(std::span<const int> parts);

/// Vol(S^{i-1}) = 2 pi^{i/2} / Gamma(i/2), exactly.
PiExpr sphere_volume_exact(int i);
double sphere_volume(int i);

/// Vol(Fl(lambda; P)) = 2^{|P|-1} prod_i V_i^{1 - conj(lambda)_i}, i = 1..n.
PiExpr flag_volume(const FlagSpec& spec);

/// Sheet count 2^(|P'| - |P|) of Fl(lambda; P') over Fl(lambda; P).
std::uint64_t covering_multiplicity(const SetPartition& p, const SetPartition& p_refined);

/// Diagonal +-1 matrices whose product of signs over each block of P is +1.
/// Only defined when lambda = (1,...,1); throws UnsupportedError otherwise.
FiniteIsotropy isotropy_group(const FlagSpec& spec);

}  // namespace oriflag
