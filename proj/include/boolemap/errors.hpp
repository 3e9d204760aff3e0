#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boolemap {

/// Argument outside the documented domain of an operation (alpha not in (0,1), u not in (0,1), ...).
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input sits on (or within epsilon of) a pole of the map being evaluated.
class singular_input : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input at which the closed form has no value, e.g. the origin of the parameter plane.
class degenerate_input : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class quadrature_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class convergence_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class insufficient_sample : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An orbit reached the pole guard before the requested length.
class orbit_truncated : public std::runtime_error {
public:
    orbit_truncated(const std::string& what, std::size_t last_valid_index)
        : std::runtime_error(what), last_valid_index_(last_valid_index) {}

    [[nodiscard]] std::size_t last_valid_index() const noexcept { return last_valid_index_; }

private:
    std::size_t last_valid_index_;
};

} // namespace boolemap
