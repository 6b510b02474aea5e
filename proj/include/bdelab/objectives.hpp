#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "bdelab/bitvector.hpp"

namespace bdelab {

// Plain fitness functions. Bit indices are 0-based throughout.
std::int64_t onemax(const BitVector& x);
std::int64_t leadingones(const BitVector& x);
// Sum of 2^(D-1-j) * x_j. Requires D <= 62 so the value fits an int64 exactly;
// for larger D use the lexicographic comparison below, which induces the same
// order.
std::int64_t binaryvalue(const BitVector& x);
// Three-way comparison of binary values for any D: the most significant
// (lowest-index) differing bit decides.
int binaryvalue_compare(const BitVector& a, const BitVector& b);
std::int64_t needle(const BitVector& x);
// D * x_0 plus the number of ones among the remaining bits; requires D >= 2.
std::int64_t dominant_onemax(const BitVector& x);
// |x| below D/5, then a penalty plateau of -1, then D at and above 4D/5.
// Requires D >= 5.
std::int64_t trap_nonconverge(const BitVector& x);

// Objective handle used by the algorithm drivers. Fitness is an int64 for
// every objective except large-D binaryvalue, where only compare() is valid.
class Objective {
public:
    virtual ~Objective() = default;

    const std::string& name() const { return name_; }

    virtual std::int64_t evaluate(const BitVector& x) const = 0;

    // Sign of f(a) - f(b).
    virtual int compare(const BitVector& a, const BitVector& b) const;

    // False when evaluate() is unavailable and selection must go through
    // compare() (binaryvalue with D > 62).
    virtual bool integer_fitness() const { return true; }

    virtual bool is_optimal(const BitVector& x) const = 0;
    virtual std::int64_t optimum_value() const = 0;

    // Whether every optimal individual has a one at this bit. Drives the
    // frequency_zero termination check.
    virtual bool optimum_requires_one(std::size_t bit) const {
        (void)bit;
        return true;
    }

protected:
    explicit Objective(std::string name) : name_(std::move(name)) {}

private:
    std::string name_;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

// id is one of: onemax, leadingones, binaryvalue, needle, dominant_onemax,
// trap. Throws std::invalid_argument for unknown ids or dimensions the
// objective does not admit.
ObjectivePtr make_objective(std::string_view id, std::size_t dim);

// Wraps f so that gene `bit` is overwritten with `value` before evaluation,
// making that gene neutral.
ObjectivePtr pin_bit(ObjectivePtr f, std::size_t bit, bool value, std::size_t dim);

}  // namespace bdelab
