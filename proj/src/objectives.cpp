#include "bdelab/objectives.hpp"

#include <bit>
#include <stdexcept>

namespace bdelab {

std::int64_t onemax(const BitVector& x) {
    return static_cast<std::int64_t>(x.count_ones());
}

std::int64_t leadingones(const BitVector& x) {
    std::size_t prefix = 0;
    for (std::size_t k = 0; k < x.word_count(); ++k) {
        const std::uint64_t w = x.word(k);
        if (w == ~0ull) {
            prefix += 64;
            continue;
        }
        prefix += static_cast<std::size_t>(std::countr_one(w));
        break;
    }
    if (prefix > x.size()) prefix = x.size();
    return static_cast<std::int64_t>(prefix);
}

std::int64_t binaryvalue(const BitVector& x) {
    const std::size_t d = x.size();
    if (d > 62) throw std::domain_error("binaryvalue: D > 62 exceeds exact integer range");
    std::int64_t v = 0;
    for (std::size_t j = 0; j < d; ++j)
        if (x.get(j)) v += std::int64_t{1} << (d - 1 - j);
    return v;
}

int binaryvalue_compare(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("binaryvalue_compare: dimension mismatch");
    for (std::size_t k = 0; k < a.word_count(); ++k) {
        const std::uint64_t diff = a.word(k) ^ b.word(k);
        if (diff) {
            const int j = std::countr_zero(diff);
            return ((a.word(k) >> j) & 1u) ? 1 : -1;
        }
    }
    return 0;
}

std::int64_t needle(const BitVector& x) {
    return x.all_ones() ? 1 : 0;
}

std::int64_t dominant_onemax(const BitVector& x) {
    const std::size_t d = x.size();
    if (d < 2) throw std::domain_error("dominant_onemax: D >= 2 required");
    const auto ones = static_cast<std::int64_t>(x.count_ones());
    return x.get(0) ? static_cast<std::int64_t>(d) + ones - 1 : ones;
}

std::int64_t trap_nonconverge(const BitVector& x) {
    const auto d = static_cast<std::int64_t>(x.size());
    if (d < 5) throw std::domain_error("trap_nonconverge: D >= 5 required");
    const auto ones = static_cast<std::int64_t>(x.count_ones());
    if (5 * ones < d) return ones;
    if (5 * ones >= 4 * d) return d;
    return -1;
}

int Objective::compare(const BitVector& a, const BitVector& b) const {
    const std::int64_t fa = evaluate(a);
    const std::int64_t fb = evaluate(b);
    return fa < fb ? -1 : (fa > fb ? 1 : 0);
}

namespace {

class OneMax final : public Objective {
public:
    explicit OneMax(std::size_t dim) : Objective("onemax"), dim_(dim) {}
    std::int64_t evaluate(const BitVector& x) const override { return onemax(x); }
    bool is_optimal(const BitVector& x) const override { return x.all_ones(); }
    std::int64_t optimum_value() const override { return static_cast<std::int64_t>(dim_); }

private:
    std::size_t dim_;
};

class LeadingOnes final : public Objective {
public:
    explicit LeadingOnes(std::size_t dim) : Objective("leadingones"), dim_(dim) {}
    std::int64_t evaluate(const BitVector& x) const override { return leadingones(x); }
    bool is_optimal(const BitVector& x) const override { return x.all_ones(); }
    std::int64_t optimum_value() const override { return static_cast<std::int64_t>(dim_); }

private:
    std::size_t dim_;
};

class BinaryValue final : public Objective {
public:
    explicit BinaryValue(std::size_t dim) : Objective("binaryvalue"), dim_(dim) {}
    std::int64_t evaluate(const BitVector& x) const override { return binaryvalue(x); }
    int compare(const BitVector& a, const BitVector& b) const override {
        return binaryvalue_compare(a, b);
    }
    bool integer_fitness() const override { return dim_ <= 62; }
    bool is_optimal(const BitVector& x) const override { return x.all_ones(); }
    std::int64_t optimum_value() const override {
        if (dim_ > 62) throw std::domain_error("binaryvalue: D > 62 exceeds exact integer range");
        return (std::int64_t{1} << dim_) - 1;
    }

private:
    std::size_t dim_;
};

class Needle final : public Objective {
public:
    Needle() : Objective("needle") {}
    std::int64_t evaluate(const BitVector& x) const override { return needle(x); }
    bool is_optimal(const BitVector& x) const override { return x.all_ones(); }
    std::int64_t optimum_value() const override { return 1; }
};

class DominantOneMax final : public Objective {
public:
    explicit DominantOneMax(std::size_t dim) : Objective("dominant_onemax"), dim_(dim) {
        if (dim < 2) throw std::invalid_argument("dominant_onemax: D >= 2 required");
    }
    std::int64_t evaluate(const BitVector& x) const override { return dominant_onemax(x); }
    bool is_optimal(const BitVector& x) const override { return x.all_ones(); }
    std::int64_t optimum_value() const override {
        return 2 * static_cast<std::int64_t>(dim_) - 1;
    }

private:
    std::size_t dim_;
};

class Trap final : public Objective {
public:
    explicit Trap(std::size_t dim) : Objective("trap"), dim_(dim) {
        if (dim < 5) throw std::invalid_argument("trap: D >= 5 required");
    }
    std::int64_t evaluate(const BitVector& x) const override { return trap_nonconverge(x); }
    bool is_optimal(const BitVector& x) const override {
        return 5 * x.count_ones() >= 4 * dim_;
    }
    std::int64_t optimum_value() const override { return static_cast<std::int64_t>(dim_); }
    // No single bit is required: any string with at least 4D/5 ones is optimal.
    bool optimum_requires_one(std::size_t) const override { return false; }

private:
    std::size_t dim_;
};

class Pinned final : public Objective {
public:
    Pinned(ObjectivePtr base, std::size_t bit, bool value, std::size_t dim)
        : Objective(base->name() + "_pinned"),
          base_(std::move(base)),
          bit_(bit),
          value_(value) {
        if (bit >= dim) throw std::invalid_argument("pin_bit: bit index out of range");
    }
    std::int64_t evaluate(const BitVector& x) const override {
        return base_->evaluate(pinned(x));
    }
    int compare(const BitVector& a, const BitVector& b) const override {
        return base_->compare(pinned(a), pinned(b));
    }
    bool integer_fitness() const override { return base_->integer_fitness(); }
    bool is_optimal(const BitVector& x) const override { return base_->is_optimal(pinned(x)); }
    std::int64_t optimum_value() const override { return base_->optimum_value(); }
    bool optimum_requires_one(std::size_t bit) const override {
        if (bit == bit_) return false;
        return base_->optimum_requires_one(bit);
    }

private:
    BitVector pinned(const BitVector& x) const {
        BitVector y = x;
        y.set(bit_, value_);
        return y;
    }

    ObjectivePtr base_;
    std::size_t bit_;
    bool value_;
};

}  // namespace

ObjectivePtr make_objective(std::string_view id, std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("objective: D >= 1 required");
    if (id == "onemax") return std::make_shared<OneMax>(dim);
    if (id == "leadingones") return std::make_shared<LeadingOnes>(dim);
    if (id == "binaryvalue") return std::make_shared<BinaryValue>(dim);
    if (id == "needle") return std::make_shared<Needle>();
    if (id == "dominant_onemax") return std::make_shared<DominantOneMax>(dim);
    if (id == "trap") return std::make_shared<Trap>(dim);
    throw std::invalid_argument("unknown objective id: " + std::string(id));
}

ObjectivePtr pin_bit(ObjectivePtr f, std::size_t bit, bool value, std::size_t dim) {
    return std::make_shared<Pinned>(std::move(f), bit, value, dim);
}

}  // namespace bdelab
