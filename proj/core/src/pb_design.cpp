#include <bit>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gridlens/error.hpp"
#include "gridlens/sensitivity.hpp"

namespace gridlens {

namespace {

// First rows of the cyclic Plackett-Burman designs.
constexpr std::string_view kGenerator12 = "++-+++---+-";
constexpr std::string_view kGenerator20 = "++--++++-+-+----++-";
constexpr std::string_view kGenerator24 = "+++++-+-++--++--+-+----";

std::vector<std::int8_t> cyclic(std::string_view generator) {
    const std::size_t m = generator.size();
    const std::size_t n = m + 1;
    std::vector<std::int8_t> out(n * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) out[i * m + j] = generator[(j + m - i) % m] == '+' ? 1 : -1;
    for (std::size_t j = 0; j < m; ++j) out[m * m + j] = -1;
    return out;
}

std::size_t reverse_bits(std::size_t x, int width) {
    std::size_t r = 0;
    for (int b = 0; b < width; ++b) r |= ((x >> b) & 1u) << (width - 1 - b);
    return r;
}

// Sylvester Hadamard matrix H[i][j] = (-1)^popcount(i & j) without the
// all-ones column j == 0. Rows are taken in bit-reversed order so the first
// factor column alternates slowest.
std::vector<std::int8_t> sylvester(std::size_t n) {
    const std::size_t m = n - 1;
    const int width = std::countr_zero(n);
    std::vector<std::int8_t> out(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t row = reverse_bits(i, width);
        for (std::size_t j = 1; j < n; ++j) out[i * m + (j - 1)] = (std::popcount(row & j) % 2) ? -1 : 1;
    }
    return out;
}

}  // namespace

PBDesign::PBDesign(std::size_t runs, std::size_t factors, std::size_t columns, std::vector<std::int8_t> matrix,
                   bool folded)
    : runs_(runs), factors_(factors), columns_(columns), folded_(folded), matrix_(std::move(matrix)) {
    if (matrix_.size() != runs_ * columns_) throw std::invalid_argument("design matrix has the wrong shape");
    if (factors_ > columns_) throw std::invalid_argument("more factors than design columns");
}

PBDesign PBDesign::foldover() const {
    std::vector<std::int8_t> m = matrix_;
    m.reserve(matrix_.size() * 2);
    for (std::int8_t x : matrix_) m.push_back(static_cast<std::int8_t>(-x));
    return PBDesign(runs_ * 2, factors_, columns_, std::move(m), true);
}

std::vector<std::size_t> supported_design_sizes(std::size_t cap) {
    std::vector<std::size_t> out;
    for (std::size_t n : {4, 8, 12, 16, 20, 24})
        if (n <= cap) out.push_back(n);
    for (std::size_t n = 32; n <= cap; n *= 2) out.push_back(n);
    return out;
}

PBDesign pb_design_of_size(std::size_t runs, std::size_t factors) {
    if (factors >= runs) throw std::invalid_argument("a design of " + std::to_string(runs) + " runs holds at most " +
                                                     std::to_string(runs - 1) + " factors");
    switch (runs) {
        case 12: return PBDesign(runs, factors, runs - 1, cyclic(kGenerator12));
        case 20: return PBDesign(runs, factors, runs - 1, cyclic(kGenerator20));
        case 24: return PBDesign(runs, factors, runs - 1, cyclic(kGenerator24));
        default: break;
    }
    if (runs < 4 || !std::has_single_bit(runs))
        throw UnsupportedSizeError("no design construction for " + std::to_string(runs) + " runs");
    return PBDesign(runs, factors, runs - 1, sylvester(runs));
}

PBDesign pb_design(std::size_t factors, std::size_t cap) {
    if (factors == 0) throw std::invalid_argument("a design needs at least one factor");
    for (std::size_t n : supported_design_sizes(cap))
        if (n > factors) return pb_design_of_size(n, factors);
    throw UnsupportedSizeError(std::to_string(factors) + " factors exceed the largest design (" + std::to_string(cap) +
                               " runs)");
}

}  // namespace gridlens
