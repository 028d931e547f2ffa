#ifndef FOCK_ZEROS_ERRORS_HPP
#define FOCK_ZEROS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fock_zeros
{

/// Base class of every exception thrown by the library.
class error : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (alpha <= 0, p <= 0, out-of-range index, ...).
class invalid_params : public error
{
    public:
        using error::error;
};

/// The product window cannot deliver the requested accuracy at this argument.
class truncation_too_small : public error
{
    public:
        using error::error;
};

/// Operation requested for the wrong norm exponent (e.g. quadrature with p = inf).
class not_applicable : public error
{
    public:
        using error::error;
};

/// Dimension theory is only available at the lattice parameter of the sequence.
class mismatched_alpha : public error
{
    public:
        using error::error;
};

class degenerate_basis : public error
{
    public:
        using error::error;
};

/// Thrown when a zero sequence does not have a one-dimensional I_Z.
class not_maximal : public error
{
    public:
        not_maximal(std::size_t k, const std::string &what) : error(what), k_(k) {}
        std::size_t k() const noexcept { return k_; }
    private:
        std::size_t k_;
};

}

#endif
