#include <gtest/gtest.h>

#include <limits>

#include "moduli_lab/mat2.hpp"

using namespace moduli_lab;
using namespace std::complex_literals;

TEST(Mat2, TraceExamples) {
    EXPECT_EQ(trace(Mat2::scalar(2.0)), complex(4.0));
    EXPECT_EQ(trace(Mat2{2.0, 1.0, 0.0, 2.0}), complex(4.0));
    EXPECT_EQ(trace(Mat2::scalar(1i)), complex(2i));
}

TEST(Mat2, DiscriminantExamples) {
    EXPECT_EQ(discriminant(Mat2::scalar(2.0)), complex(0.0));
    EXPECT_EQ(discriminant(Mat2{2.0, 1.0, 0.0, 2.0}), complex(0.0));
    // (2 + 2.5)^2 - 4 * 5 = 20.25 - 20
    EXPECT_NEAR(std::abs(discriminant(Mat2::diag(2.0, 2.5)) - 0.25), 0.0, 1e-15);
}

TEST(Mat2, RejectsNonFiniteEntries) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW((Mat2{nan, 0.0, 0.0, 1.0}), std::domain_error);
    EXPECT_THROW((Mat2{1.0, complex(0.0, inf), 0.0, 1.0}), std::domain_error);
}

TEST(Mat2, InverseIsAQuery) {
    const Mat2 singular{1.0, 2.0, 2.0, 4.0};
    EXPECT_FALSE(inverse(singular).has_value());
    const Mat2 a{2.0, 1i, 0.0, 3.0};
    const auto inv = inverse(a);
    ASSERT_TRUE(inv);
    EXPECT_LT(frobenius_norm(a * *inv - Mat2::identity()), 1e-15);
}

TEST(Mat2, ScalarDetection) {
    EXPECT_TRUE(is_scalar(Mat2::scalar(1.6)));
    EXPECT_FALSE(is_scalar(Mat2{2.0, 1e-6, 0.0, 2.0}));
    EXPECT_TRUE(is_scalar(Mat2{2.0, 1e-12, 0.0, 2.0}));
}
