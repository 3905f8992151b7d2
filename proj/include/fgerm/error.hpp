#pragma once

#include <stdexcept>
#include <string>

namespace fgerm
{

/// Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in rings/spaces of different dimension or jet order.
class dimension_mismatch : public error
{
public:
    using error::error;
};

/// An operation was called outside its domain (non-formal field,
/// non-unipotent diffeo, singular matrix, ...).
class precondition_violation : public error
{
public:
    using error::error;
};

/// A caller-supplied degree or step budget was exhausted.
class budget_exceeded : public error
{
public:
    using error::error;
};

class parse_error : public error
{
public:
    parse_error(const std::string &msg, std::size_t line, std::size_t column)
        : error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)), line_(line),
          column_(column)
    {
    }
    std::size_t line() const noexcept
    {
        return line_;
    }
    std::size_t column() const noexcept
    {
        return column_;
    }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace fgerm
