#include "ltab/render.hpp"

#include "ltab/errors.hpp"

namespace ltab {

namespace {
constexpr std::size_t kMaxDepth = 1u << 14;
}

std::string Renderer::operator()(const Term& t) {
    std::string out;
    append(out, t);
    return out;
}

void Renderer::append(std::string& out, const Term& t) {
    struct Walk {
        Renderer& r;
        std::string& out;
        void operator()(const Term& in, std::size_t depth) {
            if (depth > kMaxDepth) throw InternalError("cyclic term (occurs-check is off)");
            Term d = r.bindings_ ? r.bindings_->deref(in) : in;
            switch (d.kind()) {
                case TermKind::Variable: {
                    auto [it, inserted] = r.names_.try_emplace(d.var_id(), r.names_.size());
                    out += "_G";
                    out += std::to_string(it->second);
                    break;
                }
                case TermKind::Atom:
                    out += symbol_name(d.symbol());
                    break;
                case TermKind::Integer:
                    out += std::to_string(d.int_value());
                    break;
                case TermKind::Compound: {
                    out += symbol_name(d.symbol());
                    out += '(';
                    bool first = true;
                    for (const auto& a : d.args()) {
                        if (!first) out += ',';
                        first = false;
                        (*this)(a, depth + 1);
                    }
                    out += ')';
                    break;
                }
            }
        }
    };
    Walk{*this, out}(t, 0);
}

std::string render(const Term& t) { return Renderer{}(t); }

std::string render(const Term& t, const Bindings& bindings) { return Renderer{bindings}(t); }

}  // namespace ltab
