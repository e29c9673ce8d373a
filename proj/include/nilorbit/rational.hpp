#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilorbit {

using Rat = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<std::vector<Rat>>;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses "p/q" or "p"; `context` names the offending entry in error messages.
Rat parse_rational(const std::string& text, const std::string& context = "");

std::string rat_str(const Rat& r);

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

std::vector<double> to_double(const RatVec& v);

inline RatVec rat_vec(std::initializer_list<long> xs) {
    RatVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace nilorbit
