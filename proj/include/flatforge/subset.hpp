#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace flatforge {

// Bitmask over element indices 0..universe-1.
class Subset {
public:
    Subset() = default;
    explicit Subset(std::size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}
    Subset(std::size_t universe, std::initializer_list<std::size_t> idx) : Subset(universe) {
        for (auto i : idx) set(i);
    }
    Subset(std::size_t universe, const std::vector<std::size_t>& idx) : Subset(universe) {
        for (auto i : idx) set(i);
    }

    static Subset full(std::size_t universe) {
        Subset s(universe);
        for (std::size_t i = 0; i < universe; ++i) s.set(i);
        return s;
    }

    static Subset from_mask(std::size_t universe, std::uint64_t mask) {
        Subset s(universe);
        if (!s.words_.empty()) s.words_[0] = mask;
        s.trim();
        return s;
    }

    std::size_t universe() const { return n_; }

    bool test(std::size_t i) const { return i < n_ && ((words_[i / 64] >> (i % 64)) & 1U); }
    void set(std::size_t i) {
        check(i);
        words_[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    void reset(std::size_t i) {
        check(i);
        words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const {
        for (auto w : words_) if (w) return false;
        return true;
    }

    // Lowest member, or universe() when empty.
    std::size_t first() const { return next(0); }
    std::size_t next(std::size_t from) const {
        if (from >= n_) return n_;
        std::size_t wi = from / 64;
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from % 64));
        while (true) {
            if (w) return wi * 64 + static_cast<std::size_t>(std::countr_zero(w));
            if (++wi >= words_.size()) return n_;
            w = words_[wi];
        }
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = first(); i < n_; i = next(i + 1)) out.push_back(i);
        return out;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                fn(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    bool is_subset_of(const Subset& o) const {
        same(o);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & ~o.words_[i]) return false;
        }
        return true;
    }
    bool intersects(const Subset& o) const {
        same(o);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & o.words_[i]) return true;
        }
        return false;
    }

    Subset& operator|=(const Subset& o) { same(o); for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i]; return *this; }
    Subset& operator&=(const Subset& o) { same(o); for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i]; return *this; }
    Subset& operator-=(const Subset& o) { same(o); for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i]; return *this; }
    friend Subset operator|(Subset a, const Subset& b) { return a |= b; }
    friend Subset operator&(Subset a, const Subset& b) { return a &= b; }
    friend Subset operator-(Subset a, const Subset& b) { return a -= b; }
    Subset complement() const { return full(n_) - *this; }

    // Low 64 bits; exact when universe() <= 64.
    std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const Subset&) const = default;
    // Orders by the sorted index lists, lexicographically.
    bool lex_less(const Subset& o) const {
        std::size_t a = first(), b = o.first();
        while (a < n_ && b < o.n_) {
            if (a != b) return a < b;
            a = next(a + 1);
            b = o.next(b + 1);
        }
        return a >= n_ && b < o.n_;
    }

private:
    void check(std::size_t i) const {
        if (i >= n_) throw std::out_of_range("element index outside ground set");
    }
    void same(const Subset& o) const {
        if (o.n_ != n_) throw std::invalid_argument("subsets over different ground sets");
    }
    void trim() {
        if (n_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace flatforge
