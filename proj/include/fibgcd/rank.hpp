#pragma once

// Rank of appearance z(m) (least n > 0 with m | F_n) and
// ell(m) = lcm(m, z(m)), the least n with m | gcd(n, F_n).

#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fibgcd/arith.hpp"
#include "fibgcd/fib.hpp"

namespace fibgcd {

enum class EntryMethod { direct_scan, prime_power_lift, lcm_combine };

constexpr std::string_view to_string(EntryMethod m) noexcept {
    switch (m) {
    case EntryMethod::direct_scan: return "direct-scan";
    case EntryMethod::prime_power_lift: return "prime-power-lift";
    case EntryMethod::lcm_combine: return "lcm-combine";
    }
    return "unknown";
}

struct EntryPointRecord {
    u64 m = 1;
    u64 z = 1;
    u64 ell = 1;
    EntryMethod method = EntryMethod::direct_scan;

    friend bool operator==(const EntryPointRecord&, const EntryPointRecord&) = default;
};

/// Memo table for entry points, keyed by m.
///
/// Sharded; lookups take a shared lock only, so readers never wait on each
/// other. Eviction is CLOCK (second chance), an approximation of LRU that
/// lets a lookup mark recency without an exclusive lock. Re-inserting a key
/// overwrites it with the (identical) value.
class EntryPointCache {
public:
    static constexpr std::size_t kDefaultCapacity = std::size_t{1} << 20;

    explicit EntryPointCache(std::size_t capacity = kDefaultCapacity)
        : capacity_(capacity) {
        for (auto& s : shards_) s.cap = (capacity + kShards - 1) / kShards;
    }

    EntryPointCache(const EntryPointCache&) = delete;
    EntryPointCache& operator=(const EntryPointCache&) = delete;

    [[nodiscard]] std::optional<EntryPointRecord> find(u64 m) const {
        const Shard& s = shard(m);
        std::shared_lock lock(s.mu);
        auto it = s.map.find(m);
        if (it == s.map.end()) return std::nullopt;
        it->second->referenced.store(true, std::memory_order_relaxed);
        return it->second->record;
    }

    void insert(const EntryPointRecord& rec) {
        if (capacity_ == 0) return;
        Shard& s = shard(rec.m);
        std::unique_lock lock(s.mu);
        if (auto it = s.map.find(rec.m); it != s.map.end()) {
            it->second->record = rec;
            return;
        }
        auto slot = std::make_unique<Slot>(rec);
        if (s.ring.size() < s.cap) {
            s.ring.push_back(rec.m);
        } else {
            // Second chance: skip referenced slots once, evict the first cold one.
            for (;;) {
                Slot& victim = *s.map.at(s.ring[s.hand]);
                if (victim.referenced.exchange(false, std::memory_order_relaxed)) {
                    s.hand = (s.hand + 1) % s.ring.size();
                    continue;
                }
                s.map.erase(s.ring[s.hand]);
                s.ring[s.hand] = rec.m;
                s.hand = (s.hand + 1) % s.ring.size();
                break;
            }
        }
        s.map.emplace(rec.m, std::move(slot));
    }

    [[nodiscard]] std::size_t size() const {
        std::size_t n = 0;
        for (const auto& s : shards_) {
            std::shared_lock lock(s.mu);
            n += s.map.size();
        }
        return n;
    }

    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

    void clear() {
        for (auto& s : shards_) {
            std::unique_lock lock(s.mu);
            s.map.clear();
            s.ring.clear();
            s.hand = 0;
        }
    }

private:
    static constexpr std::size_t kShards = 16;

    struct Slot {
        explicit Slot(const EntryPointRecord& r) : record(r) {}
        EntryPointRecord record;
        std::atomic<bool> referenced{false};
    };

    struct Shard {
        mutable std::shared_mutex mu;
        std::unordered_map<u64, std::unique_ptr<Slot>> map;
        std::vector<u64> ring;
        std::size_t hand = 0;
        std::size_t cap = 0;
    };

    Shard& shard(u64 m) noexcept { return shards_[(m * 0x9E3779B97F4A7C15ULL) >> 60]; }
    const Shard& shard(u64 m) const noexcept { return shards_[(m * 0x9E3779B97F4A7C15ULL) >> 60]; }

    std::size_t capacity_;
    std::array<Shard, kShards> shards_;
};

inline EntryPointCache& default_cache() {
    static EntryPointCache cache;
    return cache;
}

/// Legendre symbol (p/5): +1 for p = ±1 mod 5, -1 for p = ±2 mod 5, 0 for p = 5.
constexpr int legendre5(u64 p) noexcept {
    switch (p % 5) {
    case 0: return 0;
    case 1:
    case 4: return 1;
    default: return -1;
    }
}

/// z(p) for prime p: the least divisor d of p - (p/5) with p | F_d.
inline u64 z_of_prime(u64 p, EntryPointCache& cache = default_cache()) {
    if (!is_prime(p)) throw precondition_error("z_of_prime: " + std::to_string(p) + " is not prime");
    if (auto hit = cache.find(p)) return hit->z;
    u64 z = 0;
    if (p == 5) {
        z = 5;
    } else {
        const u64 n = legendre5(p) == 1 ? p - 1 : p + 1;
        for (u64 d : divisors(n)) {
            if (fib_mod(d, p).f_n == 0) {
                z = d;
                break;
            }
        }
        if (z == 0)
            throw consistency_error("z_of_prime: no divisor of " + std::to_string(n) +
                                    " is an entry point of " + std::to_string(p));
    }
    cache.insert({p, z, checked_lcm(p, z), EntryMethod::direct_scan});
    return z;
}

/// z(p^e). z(p^e) / z(p) is a power of p, so the exponent is found by
/// lifting n <- p n until p^e | F_n, testing each candidate with fib_mod at
/// modulus p^e. No assumption about p^2 | F_{z(p)} is made.
inline u64 z_of_prime_power(u64 p, unsigned e, EntryPointCache& cache = default_cache()) {
    if (e == 0) throw precondition_error("z_of_prime_power: exponent must be >= 1");
    const u64 zp = z_of_prime(p, cache);
    if (e == 1) return zp;
    const u64 pe = checked_pow(p, e);
    if (auto hit = cache.find(pe)) return hit->z;
    u64 n = zp;
    for (unsigned lift = 0; fib_mod(n, pe).f_n != 0; ++lift) {
        if (lift >= e)
            throw consistency_error("z_of_prime_power: lifting did not terminate for " +
                                    std::to_string(p) + "^" + std::to_string(e));
        n = checked_mul(n, p);
    }
    cache.insert({pe, n, checked_lcm(pe, n), EntryMethod::prime_power_lift});
    return n;
}

/// Full record for m: z(m) as the lcm of z over the prime powers exactly
/// dividing m, and ell(m) = lcm(m, z(m)). z(1) = 1.
inline EntryPointRecord entry_point(u64 m, EntryPointCache& cache = default_cache()) {
    if (m == 0) throw precondition_error("entry_point: m must be >= 1");
    if (auto hit = cache.find(m)) return *hit;
    EntryPointRecord rec{m, 1, 1, EntryMethod::direct_scan};
    const Factorization f = factorize(m);
    if (f.factors.size() == 1 && f.factors[0].exponent == 1) {
        rec.z = z_of_prime(m, cache);
        rec.ell = checked_lcm(m, rec.z);
        return rec;
    }
    for (const auto& [p, e] : f.factors) rec.z = checked_lcm(rec.z, z_of_prime_power(p, e, cache));
    rec.ell = checked_lcm(m, rec.z);
    if (f.factors.size() == 1) rec.method = EntryMethod::prime_power_lift;
    else if (f.factors.size() > 1) rec.method = EntryMethod::lcm_combine;
    cache.insert(rec);
    return rec;
}

inline u64 z_of(u64 m, EntryPointCache& cache = default_cache()) { return entry_point(m, cache).z; }

inline u64 ell_of(u64 m, EntryPointCache& cache = default_cache()) { return entry_point(m, cache).ell; }

/// Factorization of ell(m), assembled from those of m and z(m).
inline Factorization ell_factorization(u64 m, EntryPointCache& cache = default_cache()) {
    const auto rec = entry_point(m, cache);
    return lcm_factorization(factorize(m), factorize(rec.z));
}

/// phi(ell(m)), the denominator of every density-series term.
inline u64 phi_of_ell(u64 m, EntryPointCache& cache = default_cache()) {
    return euler_phi(ell_factorization(m, cache));
}

} // namespace fibgcd
