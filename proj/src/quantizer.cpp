#include "qsysid/quantizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qsysid/errors.hpp"

namespace qsysid {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view s) {
    std::string tmp(s);
    if (tmp.empty()) throw DomainError("quantizer: empty number");
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size()) throw DomainError("quantizer: malformed number '" + tmp + "'");
    return v;
}

std::vector<double> parse_list(std::string_view s) {
    std::vector<double> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(parse_double(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

bool LevelInterval::contains(double x) const {
    const bool above = lower_closed ? x >= lower : x > lower;
    const bool below = upper_closed ? x <= upper : x < upper;
    return above && below;
}

Quantizer Quantizer::binary(double threshold) {
    if (!std::isfinite(threshold)) throw DomainError("binary quantizer: threshold must be finite");
    Quantizer q;
    q.kind_ = Kind::binary;
    q.threshold_ = threshold;
    q.levels_ = {-1.0, 1.0};
    if (threshold == 0.0) {
        q.warning_ = "binary quantizer with threshold 0: the system is identifiable only up to a scaling factor";
    }
    return q;
}

Quantizer Quantizer::ceil() {
    Quantizer q;
    q.kind_ = Kind::ceil;
    return q;
}

Quantizer Quantizer::identity() {
    Quantizer q;
    q.kind_ = Kind::identity;
    return q;
}

Quantizer Quantizer::custom(std::vector<double> thresholds, std::vector<double> levels) {
    if (thresholds.size() < 2) throw DomainError("custom quantizer: need at least two thresholds");
    if (levels.size() + 1 != thresholds.size()) {
        throw DomainError("custom quantizer: number of levels must be number of thresholds minus one");
    }
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const double q = thresholds[i];
        if (std::isnan(q)) throw DomainError("custom quantizer: NaN threshold");
        const bool outer = i == 0 || i + 1 == thresholds.size();
        if (!outer && !std::isfinite(q)) throw DomainError("custom quantizer: inner thresholds must be finite");
        if (i > 0 && !(thresholds[i - 1] < q)) {
            throw DomainError("custom quantizer: thresholds must be strictly increasing");
        }
    }
    if (thresholds.front() == inf || thresholds.back() == -inf) {
        throw DomainError("custom quantizer: outer thresholds out of order");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i])) throw DomainError("custom quantizer: levels must be finite");
        for (std::size_t j = 0; j < i; ++j) {
            if (levels[i] == levels[j]) throw DomainError("custom quantizer: levels must be pairwise distinct");
        }
    }
    Quantizer q;
    q.kind_ = Kind::custom;
    q.thresholds_ = std::move(thresholds);
    q.levels_ = std::move(levels);
    return q;
}

Quantizer Quantizer::parse(std::string_view text) {
    if (text == "ceil") return ceil();
    if (text == "identity") return identity();
    if (text.starts_with("binary:")) return binary(parse_double(text.substr(7)));
    if (text.starts_with("custom:")) {
        text.remove_prefix(7);
        const auto colon = text.find(':');
        if (colon == std::string_view::npos) throw DomainError("quantizer: custom needs <thresholds>:<levels>");
        std::vector<double> thresholds{-inf};
        for (double q : parse_list(text.substr(0, colon))) thresholds.push_back(q);
        thresholds.push_back(inf);
        return custom(std::move(thresholds), parse_list(text.substr(colon + 1)));
    }
    throw DomainError("quantizer: unrecognized text '" + std::string(text) + "'");
}

double Quantizer::quantize(double x) const {
    if (!std::isfinite(x)) throw DomainError("quantize: input must be finite");
    switch (kind_) {
    case Kind::binary:
        return x >= threshold_ ? 1.0 : -1.0;
    case Kind::ceil:
        return std::ceil(x);
    case Kind::identity:
        return x;
    case Kind::custom:
        break;
    }
    if (!(x > thresholds_.front()) || x > thresholds_.back()) {
        std::ostringstream msg;
        msg << "quantize: " << x << " lies outside (" << thresholds_.front() << ", " << thresholds_.back() << "]";
        throw OutOfRangeError(msg.str());
    }
    // First threshold >= x closes the interval (q_{k-1}, q_k].
    const auto it = std::lower_bound(thresholds_.begin() + 1, thresholds_.end(), x);
    return levels_[static_cast<std::size_t>(it - thresholds_.begin()) - 1];
}

LevelInterval Quantizer::level_interval(double level) const {
    auto invalid = [&] {
        std::ostringstream msg;
        msg << "level_interval: quantizer " << to_string() << " cannot emit level " << format_double(level);
        return InvalidLevelError(msg.str());
    };
    switch (kind_) {
    case Kind::binary:
        if (level == -1.0) return {-inf, threshold_, false, false};
        if (level == 1.0) return {threshold_, inf, true, false};
        throw invalid();
    case Kind::ceil:
        if (!std::isfinite(level) || std::ceil(level) != level) throw invalid();
        return {level - 1.0, level, false, true};
    case Kind::identity:
        if (!std::isfinite(level)) throw invalid();
        return {level, level, true, true};
    case Kind::custom:
        break;
    }
    const auto it = std::find(levels_.begin(), levels_.end(), level);
    if (it == levels_.end()) throw invalid();
    const auto k = static_cast<std::size_t>(it - levels_.begin());
    const double hi = thresholds_[k + 1];
    return {thresholds_[k], hi, false, std::isfinite(hi)};
}

double Quantizer::ordinal(double x) const {
    switch (kind_) {
    case Kind::binary:
        return x >= threshold_ ? 1.0 : 0.0;
    case Kind::ceil:
        return std::ceil(x);
    case Kind::identity:
        return x;
    case Kind::custom:
        break;
    }
    const double level = quantize(x);
    return static_cast<double>(std::find(levels_.begin(), levels_.end(), level) - levels_.begin());
}

std::string Quantizer::to_string() const {
    switch (kind_) {
    case Kind::binary:
        return "binary:" + format_double(threshold_);
    case Kind::ceil:
        return "ceil";
    case Kind::identity:
        return "identity";
    case Kind::custom:
        break;
    }
    std::string out = "custom:";
    for (std::size_t i = 1; i + 1 < thresholds_.size(); ++i) {
        if (i > 1) out += ',';
        out += format_double(thresholds_[i]);
    }
    out += ':';
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(levels_[i]);
    }
    return out;
}

bool roundtrip_check(const Quantizer& q, double x) {
    return q.level_interval(q.quantize(x)).contains(x);
}

}  // namespace qsysid
