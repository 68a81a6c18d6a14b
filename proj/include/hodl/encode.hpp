#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hodl/core.hpp"

namespace hodl {

/// A string over the fixed input alphabet {a, b}.
class InputString {
public:
    InputString() = default;
    /// Throws Error (E001) on characters outside {a, b}.
    explicit InputString(std::string_view text);

    const std::string& str() const { return text_; }
    std::size_t size() const { return text_.size(); }
    bool empty() const { return text_.empty(); }
    char operator[](std::size_t i) const { return text_[i]; }

    friend bool operator==(const InputString&, const InputString&) = default;

private:
    std::string text_;
};

/// All strings over {a, b} of length <= max_len, shortest first.
std::vector<InputString> all_strings(std::size_t max_len);

/// Facts `input i w_i (i+1)` ... `input (n-1) w_{n-1} end`; `input 0 empty end`
/// for the empty string.
std::vector<Clause> encode_input(const InputString& w);

/// Reconstructs the string from a chain of input facts.
InputString decode_input(const std::vector<Clause>& facts);

/// P union D_w. Adds `input : i -> i -> i -> o`; throws Error (E101) when the
/// program declares input at another type.
Program merge(const Program& prog, const std::vector<Clause>& facts);

}  // namespace hodl
