#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treesub/errors.hpp"

namespace treesub {

// Arbitrary-precision unsigned integer, little-endian base 2^32 limbs.
// Only the operations the vertex-counting formulas need: add, subtract,
// multiply by a small factor, power, compare, decimal printing.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v) {
        while (v) {
            limbs_.push_back(static_cast<std::uint32_t>(v));
            v >>= 32;
        }
    }

    static BigUint pow(std::uint64_t base, unsigned exp) {
        BigUint r(1);
        for (unsigned i = 0; i < exp; ++i) r.mul_small(base);
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }

    void add(const BigUint& o) {
        std::uint64_t carry = 0;
        std::size_t n = std::max(limbs_.size(), o.limbs_.size());
        limbs_.resize(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
            limbs_[i] = static_cast<std::uint32_t>(s);
            carry = s >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    }

    // this -= o; requires this >= o.
    void sub(const BigUint& o) {
        if (cmp(o) < 0) throw InputError("BigUint subtraction underflow");
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::int64_t d = static_cast<std::int64_t>(limbs_[i]) - borrow -
                             (i < o.limbs_.size() ? o.limbs_[i] : 0);
            if (d < 0) {
                d += (std::int64_t(1) << 32);
                borrow = 1;
            } else {
                borrow = 0;
            }
            limbs_[i] = static_cast<std::uint32_t>(d);
        }
        trim();
    }

    void mul_small(std::uint64_t f) {
        if (f == 0 || is_zero()) {
            limbs_.clear();
            return;
        }
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            // f fits in 32 bits for every use here; guard anyway.
            std::uint64_t p = static_cast<std::uint64_t>(limbs_[i]) * f + carry;
            limbs_[i] = static_cast<std::uint32_t>(p);
            carry = p >> 32;
        }
        while (carry) {
            limbs_.push_back(static_cast<std::uint32_t>(carry));
            carry >>= 32;
        }
    }

    int cmp(const BigUint& o) const {
        if (limbs_.size() != o.limbs_.size()) return limbs_.size() < o.limbs_.size() ? -1 : 1;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    friend bool operator==(const BigUint& a, const BigUint& b) { return a.cmp(b) == 0; }
    friend bool operator<(const BigUint& a, const BigUint& b) { return a.cmp(b) < 0; }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<std::uint32_t> work = limbs_;
        std::string digits;
        while (!work.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = work.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | work[i];
                work[i] = static_cast<std::uint32_t>(cur / 1000000000u);
                rem = cur % 1000000000u;
            }
            while (!work.empty() && work.back() == 0) work.pop_back();
            for (int d = 0; d < 9; ++d) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        return std::string(digits.rbegin(), digits.rend());
    }

    // Exact value when it fits; throws otherwise.
    std::uint64_t to_u64() const {
        if (limbs_.size() > 2) throw InputError("BigUint does not fit in 64 bits");
        std::uint64_t v = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
        return v;
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }

    std::vector<std::uint32_t> limbs_;
};

// |B_R| of the k-regular tree with a proper k-coloring:
// 1 + k * ((k-1)^R - 1) / (k - 2).
inline BigUint plain_ball_size(int alphabet, int radius) {
    BigUint total(1);
    BigUint shell(1);
    for (int m = 1; m <= radius; ++m) {
        if (m == 1)
            shell = BigUint(static_cast<std::uint64_t>(alphabet));
        else
            shell.mul_small(static_cast<std::uint64_t>(alphabet - 1));
        total.add(shell);
    }
    return total;
}

} // namespace treesub
