#include "oriflag/flagspec.hpp"

#include "oriflag/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <numeric>

namespace oriflag {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

int parse_int(std::string_view token) {
    token = trim(token);
    int value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc{} || ptr != end)
        throw ParseError("expected an integer, got '" + std::string(token) + "'");
    return value;
}

std::string join_ints(const std::vector<int>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

// (i-2)!! with the conventions (-1)!! = 0!! = 1.
Rational double_factorial(int m) {
    Rational out(1);
    for (int j = m; j > 1; j -= 2) out *= j;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// OrderedPartition

OrderedPartition::OrderedPartition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::invalid_argument("OrderedPartition: needs at least one part");
    for (int p : parts_)
        if (p < 1) throw std::invalid_argument("OrderedPartition: parts must be >= 1");
    n_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::vector<int> OrderedPartition::signature() const {
    std::vector<int> d(parts_.size());
    std::partial_sum(parts_.begin(), parts_.end(), d.begin());
    return d;
}

bool OrderedPartition::all_ones() const {
    return std::all_of(parts_.begin(), parts_.end(), [](int p) { return p == 1; });
}

// ---------------------------------------------------------------------------
// SetPartition

SetPartition::SetPartition(std::vector<std::vector<int>> blocks, int k)
    : blocks_(std::move(blocks)), k_(k) {
    if (k_ < 1) throw std::invalid_argument("SetPartition: k must be >= 1");
    std::vector<int> seen(static_cast<std::size_t>(k_) + 1, 0);
    for (auto& block : blocks_) {
        if (block.empty()) throw std::invalid_argument("SetPartition: empty block");
        for (int i : block) {
            if (i < 1 || i > k_)
                throw std::invalid_argument("SetPartition: index " + std::to_string(i) +
                                            " outside {1.." + std::to_string(k_) + "}");
            if (seen[static_cast<std::size_t>(i)]++)
                throw std::invalid_argument("SetPartition: index " + std::to_string(i) +
                                            " appears twice");
        }
        std::sort(block.begin(), block.end());
    }
    for (int i = 1; i <= k_; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw std::invalid_argument("SetPartition: index " + std::to_string(i) +
                                        " not covered");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

SetPartition SetPartition::trivial(int k) {
    std::vector<int> all(static_cast<std::size_t>(std::max(k, 0)));
    std::iota(all.begin(), all.end(), 1);
    return SetPartition({all}, k);
}

SetPartition SetPartition::complete(int k) {
    std::vector<std::vector<int>> blocks;
    for (int i = 1; i <= k; ++i) blocks.push_back({i});
    return SetPartition(std::move(blocks), k);
}

PartitionKind SetPartition::kind() const {
    if (is_trivial()) return PartitionKind::Trivial;
    if (is_complete()) return PartitionKind::Complete;
    return PartitionKind::Proper;
}

int SetPartition::block_of(int index) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        if (std::binary_search(blocks_[b].begin(), blocks_[b].end(), index))
            return static_cast<int>(b);
    throw std::out_of_range("SetPartition::block_of: index not in partition");
}

bool SetPartition::refines(const SetPartition& coarser) const {
    if (k_ != coarser.k_) return false;
    return std::all_of(blocks_.begin(), blocks_.end(), [&](const std::vector<int>& block) {
        const int target = coarser.block_of(block.front());
        return std::all_of(block.begin(), block.end(),
                           [&](int i) { return coarser.block_of(i) == target; });
    });
}

// ---------------------------------------------------------------------------
// FlagSpec

FlagSpec::FlagSpec(OrderedPartition lambda, SetPartition p)
    : lambda_(std::move(lambda)), p_(std::move(p)) {
    if (p_.k() != lambda_.size())
        throw std::invalid_argument("FlagSpec: P partitions {1.." + std::to_string(p_.k()) +
                                    "} but lambda has " + std::to_string(lambda_.size()) +
                                    " parts");
}

FlagSpec FlagSpec::permuted(std::span<const int> sigma) const {
    const int k = lambda_.size();
    if (static_cast<int>(sigma.size()) != k)
        throw std::invalid_argument("FlagSpec::permuted: permutation has wrong length");
    std::vector<int> check(sigma.begin(), sigma.end());
    std::sort(check.begin(), check.end());
    for (int i = 0; i < k; ++i)
        if (check[static_cast<std::size_t>(i)] != i)
            throw std::invalid_argument("FlagSpec::permuted: not a permutation of 0..k-1");

    std::vector<int> parts(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        parts[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] =
            lambda_.parts()[static_cast<std::size_t>(i)];
    auto blocks = p_.blocks();
    for (auto& block : blocks)
        for (int& idx : block) idx = sigma[static_cast<std::size_t>(idx - 1)] + 1;
    return FlagSpec(OrderedPartition(std::move(parts)), SetPartition(std::move(blocks), k));
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    text = trim(text);
    if (text.empty()) throw ParseError("empty integer list");
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(parse_int(text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

SetPartition parse_set_partition(std::string_view text, int k) {
    std::vector<std::vector<int>> blocks;
    text = trim(text);
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            continue;
        }
        if (text[pos] != '{') throw ParseError("set partition: expected '{' in '" + std::string(text) + "'");
        const auto close = text.find('}', pos);
        if (close == std::string_view::npos) throw ParseError("set partition: unterminated block");
        blocks.push_back(parse_int_list(text.substr(pos + 1, close - pos - 1)));
        pos = close + 1;
    }
    if (blocks.empty()) throw ParseError("set partition: no blocks");
    try {
        return SetPartition(std::move(blocks), k);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

FlagSpec FlagSpec::parse(std::string_view text) {
    // Tokens are "lambda=..." and "P=..."; the P value may contain spaces between blocks.
    std::string rest(text);
    const auto lpos = rest.find("lambda=");
    const auto ppos = rest.find("P=");
    if (lpos == std::string::npos || ppos == std::string::npos)
        throw ParseError("flag spec must look like 'lambda=1,1,1 P={1}{2,3}', got '" + rest + "'");
    const auto value_of = [&](std::size_t key_pos, std::size_t key_len, std::size_t other) {
        const std::size_t begin = key_pos + key_len;
        const std::size_t end = other > key_pos ? other : rest.size();
        return std::string(trim(std::string_view(rest).substr(begin, end - begin)));
    };
    auto parts = parse_int_list(value_of(lpos, 7, ppos));
    const auto p_text = value_of(ppos, 2, lpos);
    try {
        OrderedPartition lambda(std::move(parts));
        return FlagSpec(lambda, parse_set_partition(p_text, lambda.size()));
    } catch (const ParseError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

std::string FlagSpec::to_string() const {
    std::string out = "lambda=" + join_ints(lambda_.parts(), ',') + " P=";
    for (const auto& block : p_.blocks()) out += "{" + join_ints(block, ',') + "}";
    return out;
}

FlagSpec FlagSpec::from_json(std::string_view json_text) {
    try {
        const auto j = nlohmann::json::parse(json_text);
        OrderedPartition lambda(j.at("lambda").get<std::vector<int>>());
        SetPartition p(j.at("P").get<std::vector<std::vector<int>>>(), lambda.size());
        return FlagSpec(std::move(lambda), std::move(p));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("flag spec JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

std::string FlagSpec::to_json() const {
    nlohmann::ordered_json j;
    j["lambda"] = lambda_.parts();
    j["P"] = p_.blocks();
    return j.dump();
}

// ---------------------------------------------------------------------------
// Volumes and groups

std::vector<int> conjugate_partition(std::span<const int> parts) {
    if (parts.empty()) throw std::invalid_argument("conjugate_partition: empty partition");
    std::vector<int> sorted(parts.begin(), parts.end());
    for (int p : sorted)
        if (p < 1) throw std::invalid_argument("conjugate_partition: parts must be >= 1");
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<int> conj(static_cast<std::size_t>(sorted.front()), 0);
    for (int p : sorted)
        for (int j = 0; j < p; ++j) ++conj[static_cast<std::size_t>(j)];
    return conj;
}

PiExpr sphere_volume_exact(int i) {
    if (i < 1) throw std::invalid_argument("sphere_volume: i must be >= 1");
    if (i % 2 == 0) {
        const int m = i / 2;
        Rational fact(1);
        for (int j = 2; j < m; ++j) fact *= j;
        return PiExpr(Rational(2) / fact, m);
    }
    // Gamma(i/2) = (i-2)!! / 2^((i-1)/2) * sqrt(pi)
    const int half = (i - 1) / 2;
    Rational two_pow(1);
    for (int j = 0; j <= half; ++j) two_pow *= 2;
    return PiExpr(two_pow / double_factorial(i - 2), half);
}

double sphere_volume(int i) { return sphere_volume_exact(i).value(); }

PiExpr flag_volume(const FlagSpec& spec) {
    const int n = spec.n();
    auto conj = conjugate_partition(spec.lambda().parts());
    conj.resize(static_cast<std::size_t>(n), 0);
    Rational prefactor(1);
    for (int b = 1; b < spec.p().block_count(); ++b) prefactor *= 2;
    PiExpr vol(prefactor);
    for (int i = 1; i <= n; ++i) {
        const int exponent = 1 - conj[static_cast<std::size_t>(i - 1)];
        if (exponent != 0) vol *= sphere_volume_exact(i).pow(exponent);
    }
    return vol;
}

std::uint64_t covering_multiplicity(const SetPartition& p, const SetPartition& p_refined) {
    if (!p_refined.refines(p))
        throw std::invalid_argument("covering_multiplicity: second partition does not refine the first");
    const int m = p_refined.block_count() - p.block_count();
    return std::uint64_t{1} << m;
}

FiniteIsotropy isotropy_group(const FlagSpec& spec) {
    if (!spec.lambda().all_ones())
        throw UnsupportedError("isotropy_group: SG_lambda^P is finite only for lambda = (1,...,1); got " +
                               spec.to_string());
    const int k = spec.lambda().size();
    if (k > 12) throw UnsupportedError("isotropy_group: k > 12 is not enumerated");

    std::vector<int> block_of(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) block_of[static_cast<std::size_t>(i)] = spec.p().block_of(i + 1);

    FiniteIsotropy group;
    std::vector<int> signs(static_cast<std::size_t>(k));
    std::vector<int> parity(static_cast<std::size_t>(spec.p().block_count()));
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        std::fill(parity.begin(), parity.end(), 0);
        for (int i = 0; i < k; ++i) {
            const bool flip = (mask >> i) & 1u;
            signs[static_cast<std::size_t>(i)] = flip ? -1 : 1;
            parity[static_cast<std::size_t>(block_of[static_cast<std::size_t>(i)])] ^= flip;
        }
        if (std::all_of(parity.begin(), parity.end(), [](int b) { return b == 0; }))
            group.elements.push_back(Rotation::diagonal(signs));
    }
    return group;
}

}  // namespace oriflag
