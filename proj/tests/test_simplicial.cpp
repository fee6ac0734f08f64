#include "oracles.hpp"

#include "fkmorse/errors.hpp"
#include "fkmorse/simplicial.hpp"

#include <doctest.h>

#include <set>

using namespace fkmorse;

namespace {

Simplex w(int dim, std::vector<Letter> letters)
{
    return Simplex(dim, std::move(letters));
}

Simplex y_power(int r)
{
    return Simplex(1, std::vector<Letter>(static_cast<std::size_t>(r), 1));
}

} // namespace

TEST_CASE("generator faces follow the three display cases")
{
    CHECK(face_generator(Generator(2, 1), 0) == Generator(1, 1));
    CHECK_FALSE(face_generator(Generator(2, 1), 2).has_value());
    CHECK(face_generator(Generator(3, 2), 2) == Generator(2, 1));
    CHECK_FALSE(face_generator(Generator(3, 3), 0).has_value());

    for (int n = 1; n <= 8; ++n) {
        for (int k = 1; k <= n; ++k) {
            for (int i = 0; i <= n; ++i) {
                Simplex expect = oracle::face(w(n, {static_cast<Letter>(k)}), i);
                auto got = face_generator(Generator(n, k), i);
                if (expect.is_identity())
                    CHECK_FALSE(got.has_value());
                else
                    CHECK((got && got->index() == expect.word()[0] && got->dim() == n - 1));
            }
        }
    }
    CHECK_THROWS_AS(face_generator(Generator(3, 1), 4), DomainError);
    CHECK_THROWS_AS(face_generator(Generator(3, 1), -1), DomainError);
    CHECK_THROWS_AS(Generator(3, 4), DomainError);
    CHECK_THROWS_AS(Generator(0, 1), DomainError);
}

TEST_CASE("degeneracy closed form agrees with subscript rewriting")
{
    for (int n = 1; n <= 6; ++n) {
        for (int k = 1; k <= n; ++k) {
            for (int j = 0; j <= n; ++j) {
                INFO("n=" << n << " k=" << k << " j=" << j);
                CHECK(degeneracy_generator(Generator(n, k), j).index() == oracle::degeneracy_by_subscripts(n, k, j));
            }
        }
    }
    for (int n = 1; n <= 9; ++n) {
        for (int k = 1; k <= n; ++k) {
            for (int j = 0; j <= n; ++j)
                CHECK(degeneracy(w(n, {static_cast<Letter>(k)}), j) == oracle::degeneracy(w(n, {static_cast<Letter>(k)}), j));
        }
    }
    CHECK(degeneracy_generator(Generator(1, 1), 0) == Generator(2, 1));
    CHECK(degeneracy_generator(Generator(1, 1), 1) == Generator(2, 2));
    CHECK(degeneracy_generator(Generator(2, 1), 2) == Generator(3, 2));
    CHECK(degeneracy_generator(Generator(2, 2), 1) == Generator(3, 3));
    CHECK_THROWS_AS(degeneracy_generator(Generator(2, 2), 3), DomainError);
}

TEST_CASE("faces and degeneracies of words")
{
    CHECK(face(w(2, {1, 2}), 1) == y_power(2));
    CHECK(face(w(3, {3, 2, 1}), 0) == w(2, {2, 1}));
    CHECK(face(Simplex::identity(5), 3) == Simplex::identity(4));
    CHECK_THROWS_AS(face(Simplex::identity(0), 0), DomainError);
    CHECK_THROWS_AS(face(w(2, {1}), 3), DomainError);

    CHECK(degeneracy(y_power(4), 0) == w(2, {1, 1, 1, 1}));
    CHECK(degeneracy(w(2, {2, 1, 1}), 2) == w(3, {3, 2, 2}));
    CHECK(degeneracy(Simplex::identity(0), 0) == Simplex::identity(1));
    CHECK_THROWS_AS(degeneracy(y_power(1), 2), DomainError);

    for (int n = 1; n <= 5; ++n) {
        for (int len = 0; len <= 3; ++len) {
            for (const Simplex& x : enumerate_stratum(StratumKey(n, len))) {
                for (int i = 0; i <= n; ++i)
                    REQUIRE(face(x, i) == oracle::face(x, i));
                for (int j = 0; j <= n; ++j)
                    REQUIRE(degeneracy(x, j) == oracle::degeneracy(x, j));
            }
        }
    }
}

TEST_CASE("degeneracy detection")
{
    CHECK(is_degenerate(w(2, {2, 2, 2})));
    CHECK_FALSE(is_degenerate(w(2, {2, 1})));
    auto tau3 = degeneracy_witness(w(3, {3, 2, 2}));
    REQUIRE(tau3.has_value());
    CHECK(tau3->j == 2);
    CHECK(tau3->preimage == w(2, {2, 1, 1}));

    CHECK_FALSE(is_degenerate(Simplex::identity(0)));
    CHECK(is_degenerate(Simplex::identity(1)));
    CHECK(is_degenerate(Simplex::identity(4)));

    for (int n = 0; n <= 4; ++n) {
        for (int len = 0; len <= 3; ++len) {
            for (const Simplex& x : oracle::stratum(n, len)) {
                INFO(to_text(x) << " dim " << n);
                CHECK(is_degenerate(x) == oracle::degenerate_by_search(x));
            }
        }
    }
    for (int n = 1; n <= 5; ++n) {
        for (int len = 0; len <= 4; ++len) {
            for (const Simplex& x : enumerate_stratum(StratumKey(n, len))) {
                auto wit = degeneracy_witness(x);
                auto ref = oracle::degenerate_index(x);
                REQUIRE(wit.has_value() == ref.has_value());
                if (wit) {
                    CHECK(wit->j == *ref);
                    CHECK(degeneracy(wit->preimage, wit->j) == x);
                }
                // nondegenerate exactly when every generator index occurs
                std::set<Letter> used(x.word().begin(), x.word().end());
                CHECK(is_degenerate(x) == (static_cast<int>(used.size()) < n));
                if (!is_degenerate(x))
                    CHECK(used.count(static_cast<Letter>(n)) == 1);
            }
        }
    }
}

TEST_CASE("six nondegenerate 2-simplices of length 3")
{
    auto cells = enumerate_stratum(StratumKey(2, 3));
    CHECK(cells.size() == 8);
    CHECK(std::count_if(cells.begin(), cells.end(), [](const Simplex& x) { return !is_degenerate(x); }) == 6);
}

TEST_CASE("order")
{
    CHECK(lex_compare(y_power(1), y_power(2)) == std::strong_ordering::less);
    CHECK(lex_compare(w(2, {1, 2}), w(2, {2, 1})) == std::strong_ordering::less);
    for (int k = 3; k <= 7; ++k) {
        std::vector<Letter> sigma, other;
        for (int i = k; i >= 1; --i)
            sigma.push_back(static_cast<Letter>(i));
        other = sigma;
        std::swap(other[0], other[1]);
        CHECK(lex_compare(w(k, other), w(k, sigma)) == std::strong_ordering::less);
    }
    CHECK(lex_compare(w(2, {2, 2}), w(2, {1, 1, 1})) == std::strong_ordering::less);
    CHECK_THROWS_AS(lex_compare(y_power(1), w(2, {1})), DomainError);
}

TEST_CASE("stratum enumeration")
{
    CHECK(enumerate_stratum(StratumKey(1, 3)) == std::vector<Simplex>{y_power(3)});
    CHECK(enumerate_stratum(StratumKey(2, 2)) ==
          std::vector<Simplex>{w(2, {1, 1}), w(2, {1, 2}), w(2, {2, 1}), w(2, {2, 2})});
    CHECK(enumerate_stratum(StratumKey(3, 0)) == std::vector<Simplex>{Simplex::identity(3)});
    CHECK(enumerate_stratum(StratumKey(0, 2)).empty());
    for (int n = 0; n <= 5; ++n) {
        for (int len = 0; len <= 4; ++len) {
            auto cells = enumerate_stratum(StratumKey(n, len));
            CHECK(cells == oracle::stratum(n, len));
            CHECK(cells.size() == stratum_size(StratumKey(n, len)));
            CHECK(std::is_sorted(cells.begin(), cells.end()));
        }
    }
    int seen = 0;
    for_each_in_stratum(StratumKey(3, 3), [&seen](const Simplex&) { return ++seen < 5; });
    CHECK(seen == 5);
    CHECK_THROWS_AS(stratum_size(StratumKey(250, 20)), ResourceLimitError);
    CHECK_THROWS_AS(StratumKey(-1, 0), DomainError);
}

TEST_CASE("simplicial identities, homomorphism and the length filtration")
{
    std::mt19937_64 rng(oracle::seed());
    for (int sample = 0; sample < 3000; ++sample) {
        Simplex x = oracle::random_simplex(rng, 2, 7, 6);
        Simplex z = oracle::random_simplex(rng, x.dim(), x.dim(), 4);
        const int n = x.dim();
        INFO(to_text(x) << " dim " << n);
        for (int i = 0; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j)
                CHECK(face(face(x, j), i) == face(face(x, i), j - 1));
            CHECK(face(x, i).length() <= x.length());
            CHECK(face(concat(x, z), i) == concat(face(x, i), face(z, i)));
        }
        for (int j = 0; j <= n; ++j) {
            CHECK(face(degeneracy(x, j), j) == x);
            CHECK(face(degeneracy(x, j), j + 1) == x);
            for (int i = 0; i <= j; ++i)
                CHECK(degeneracy(degeneracy(x, j), i) == degeneracy(degeneracy(x, i), j + 1));
        }
    }
    CHECK_THROWS_AS(concat(y_power(1), w(2, {1})), DomainError);
}

TEST_CASE("text syntax")
{
    CHECK(to_text(Simplex::identity(3)) == "e");
    CHECK(to_text(w(3, {3, 2, 2})) == "a3.a2.a2");
    CHECK(parse_simplex("a3.a2.a2", 3) == w(3, {3, 2, 2}));
    CHECK(parse_simplex("a1^3.a2", 2) == w(2, {1, 1, 1, 2}));
    CHECK(parse_simplex("e", 4) == Simplex::identity(4));
    for (const Simplex& x : enumerate_stratum(StratumKey(3, 3)))
        CHECK(parse_simplex(to_text(x), 3) == x);
    CHECK_THROWS_AS(parse_simplex("a4", 3), ParseError);
    CHECK_THROWS_AS(parse_simplex("a1..a2", 3), ParseError);
    CHECK_THROWS_AS(parse_simplex("b1", 3), ParseError);
    CHECK_THROWS_AS(parse_simplex("", 3), ParseError);
    CHECK_THROWS_AS(Simplex(2, {3}), DomainError);
}
