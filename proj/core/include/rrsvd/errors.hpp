#ifndef RRSVD_ERRORS_HPP
#define RRSVD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rrsvd {

// Violated precondition (bad dimensions, invalid parameters, ...).
struct contract_violation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An underlying iterative routine failed to converge.
struct numeric_failure : std::runtime_error {
    numeric_failure(const std::string& what, std::size_t rows, std::size_t cols)
        : std::runtime_error(what + " (matrix " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ")"),
          rows(rows),
          cols(cols) {}
    std::size_t rows;
    std::size_t cols;
};

// Three-term recurrence lost positivity; `index` is the first bad coefficient.
struct recurrence_breakdown : std::runtime_error {
    recurrence_breakdown(std::size_t index)
        : std::runtime_error("recurrence breakdown at coefficient " + std::to_string(index)),
          index(index) {}
    std::size_t index;
};

}  // namespace rrsvd

#endif
