#pragma once

#include <string>
#include <unordered_map>

#include "ltab/bindings.hpp"
#include "ltab/term.hpp"

namespace ltab {

/// Renders terms in the program dialect. Unbound variables print as `_G<n>`,
/// numbered by first appearance across every term rendered through the same
/// Renderer, so one solution gets one consistent numbering.
class Renderer {
public:
    Renderer() = default;
    explicit Renderer(const Bindings& bindings) : bindings_(&bindings) {}

    std::string operator()(const Term& t);
    void append(std::string& out, const Term& t);

private:
    const Bindings* bindings_ = nullptr;
    std::unordered_map<VarId, std::size_t> names_;
};

std::string render(const Term& t);
std::string render(const Term& t, const Bindings& bindings);

}  // namespace ltab
