#include "qsysid/rng.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace qsysid {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed, std::uint64_t substream)
    : seed_(seed), substream_(substream), engine_(hash_combine(seed, substream)) {}

Rng Rng::substream(std::uint64_t index) const {
    return Rng(seed_, hash_combine(substream_, index));
}

double Rng::uniform() {
    return boost::random::uniform_01<double>()(*this);
}

double Rng::normal() {
    return boost::random::normal_distribution<double>()(*this);
}

double Rng::exponential(double rate) {
    return boost::random::exponential_distribution<double>(rate)(*this);
}

}  // namespace qsysid
