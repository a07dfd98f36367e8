#include "nauticle/workspace.hpp"

#include "nauticle/error.hpp"
#include "nauticle/interactions.hpp"
#include "nauticle/kernel.hpp"

namespace nauticle {

namespace {
const char* kBuiltinNames[] = {"euler", "rand", "fmax", "fmin",  "fsum", "fmean", "exp",
                               "log",   "sin",  "cos",  "tan",   "sqrt", "abs",   "floor",
                               "sgn",   "min",  "max",  "dot",   "norm"};
}

void Workspace::reserve_name(const std::string& name) {
    if (index_.count(name)) throw assembly_error("duplicate symbol name '", name, "'");
    if (is_kernel_keyword(name))
        throw assembly_error("name '", name, "' is a reserved kernel keyword");
    if (find_interaction(name))
        throw assembly_error("name '", name, "' is a reserved interaction operator");
    for (const char* b : kBuiltinNames)
        if (name == b) throw assembly_error("name '", name, "' is a reserved function name");
}

Constant* Workspace::add_constant(const std::string& name, Tensor value) {
    reserve_name(name);
    constants_.push_back(std::make_unique<Constant>(Constant{name, std::move(value)}));
    index_[name] = Kind::Constant;
    return constants_.back().get();
}

Variable* Workspace::add_variable(const std::string& name, Tensor value) {
    reserve_name(name);
    variables_.push_back(std::make_unique<Variable>(Variable{name, std::move(value)}));
    index_[name] = Kind::Variable;
    return variables_.back().get();
}

std::shared_ptr<Field> Workspace::add_field(const std::string& name, std::vector<Tensor> values) {
    reserve_name(name);
    if (ps_ && static_cast<int>(values.size()) != ps_->particle_count())
        throw assembly_error("field '", name, "' holds ", values.size(), " values but the particle system has ",
                             ps_->particle_count());
    auto f = std::make_shared<Field>(Field{name, std::move(values)});
    fields_.push_back(f);
    index_[name] = Kind::Field;
    return f;
}

Constant* Workspace::find_constant(const std::string& name) const {
    for (const auto& c : constants_)
        if (c->name == name) return c.get();
    return nullptr;
}

Variable* Workspace::find_variable(const std::string& name) const {
    for (const auto& v : variables_)
        if (v->name == name) return v.get();
    return nullptr;
}

std::shared_ptr<Field> Workspace::find_field(const std::string& name) const {
    for (const auto& f : fields_)
        if (f->name == name) return f;
    return nullptr;
}

}  // namespace nauticle
