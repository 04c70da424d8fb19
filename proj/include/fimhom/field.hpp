#pragma once

#include <cstdint>
#include <stdexcept>

namespace fimhom {

// A prime field F_p. Primality is verified at construction; all entry values
// are kept reduced to [0, p).
struct FieldSpec {
    uint32_t p = 32003;

    FieldSpec() = default;
    explicit FieldSpec(uint32_t characteristic) : p(characteristic)
    {
        if (!is_prime(p))
            throw std::invalid_argument("field characteristic must be a prime >= 2");
    }

    static bool is_prime(uint64_t n)
    {
        if (n < 2)
            return false;
        for (uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

    uint32_t reduce(long long v) const
    {
        long long r = v % static_cast<long long>(p);
        if (r < 0)
            r += p;
        return static_cast<uint32_t>(r);
    }

    uint32_t add(uint32_t a, uint32_t b) const
    {
        uint32_t s = a + b;
        return s >= p ? s - p : s;
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p - b; }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p - a; }
    uint32_t mul(uint32_t a, uint32_t b) const
    {
        return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
    }
    uint32_t pow(uint32_t a, uint64_t e) const
    {
        uint32_t r = 1 % p;
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    uint32_t inv(uint32_t a) const
    {
        if (a == 0)
            throw std::domain_error("division by zero in F_p");
        return pow(a, p - 2);
    }

    bool operator==(const FieldSpec& o) const { return p == o.p; }
    bool operator!=(const FieldSpec& o) const { return p != o.p; }
};

}  // namespace fimhom
