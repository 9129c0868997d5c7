#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qsysid {

/// Interval of latent values mapped to one level. Infinite endpoints are
/// always open.
struct LevelInterval {
    double lower;
    double upper;
    bool lower_closed = false;
    bool upper_closed = true;

    bool contains(double x) const;
};

/// A known output quantizer.
///
///   binary(C)  x <  C -> -1, x >= C -> +1
///   ceil       x -> smallest integer >= x, level p covers (p - 1, p]
///   custom     level p_k covers (q_{k-1}, q_k]
///   identity   pass-through, each level covers the single point [p, p]
///
/// Immutable after construction.
class Quantizer {
public:
    enum class Kind { binary, ceil, custom, identity };

    static Quantizer binary(double threshold);
    static Quantizer ceil();
    /// thresholds q_0..q_Q (strictly increasing; the outer ones may be
    /// infinite), levels p_1..p_Q (pairwise distinct).
    static Quantizer custom(std::vector<double> thresholds, std::vector<double> levels);
    static Quantizer identity();

    /// Parses `binary:<C>`, `ceil`, `custom:<q1,..,q_{Q-1}>:<p1,..,pQ>` or
    /// `identity`. Throws DomainError on malformed text.
    static Quantizer parse(std::string_view text);

    Kind kind() const { return kind_; }
    double threshold() const { return threshold_; }
    const std::vector<double>& thresholds() const { return thresholds_; }
    const std::vector<double>& levels() const { return levels_; }

    /// Set when the configuration is legal but degenerate (binary with C = 0).
    const std::optional<std::string>& warning() const { return warning_; }

    /// Level whose interval contains x. Throws OutOfRangeError when a custom
    /// quantizer has finite outer thresholds and x is outside them.
    double quantize(double x) const;

    /// Interval of latent values mapped to `level`. Throws InvalidLevelError
    /// when the quantizer cannot emit `level`.
    LevelInterval level_interval(double level) const;

    /// Position of x's interval in the increasing order of intervals.
    double ordinal(double x) const;

    /// Text form accepted by parse(); round-trips bit-exactly.
    std::string to_string() const;

private:
    Quantizer() = default;

    Kind kind_ = Kind::identity;
    double threshold_ = 0.0;
    std::vector<double> thresholds_;
    std::vector<double> levels_;
    std::optional<std::string> warning_;
};

/// True iff x lies in level_interval(quantize(x)).
bool roundtrip_check(const Quantizer& q, double x);

}  // namespace qsysid
