#pragma once

#include <stdexcept>
#include <string>

namespace fprank {

// A matrix that was required to be invertible is singular (exact test).
class singular_matrix_error : public std::runtime_error {
public:
    explicit singular_matrix_error(const std::string& what) : std::runtime_error(what) {}
};

// A randomized result failed its certification check even after the retry
// budget was exhausted.
class verification_error : public std::runtime_error {
public:
    explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (matrix, graph, script, vertex set).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fprank
