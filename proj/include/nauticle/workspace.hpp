#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "nauticle/field.hpp"
#include "nauticle/particle_system.hpp"

namespace nauticle {

/// Owner of all named symbols of a case: constants (immutable after
/// assembly), variables, per-particle fields and the particle system.
/// Names live in one flat namespace and keep their definition order, so
/// later definitions may reference earlier ones.
class Workspace {
public:
    Constant* add_constant(const std::string& name, Tensor value);
    Variable* add_variable(const std::string& name, Tensor value);
    std::shared_ptr<Field> add_field(const std::string& name, std::vector<Tensor> values);

    Constant* find_constant(const std::string& name) const;
    Variable* find_variable(const std::string& name) const;
    std::shared_ptr<Field> find_field(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) != 0; }

    const std::vector<std::unique_ptr<Constant>>& constants() const { return constants_; }
    const std::vector<std::unique_ptr<Variable>>& variables() const { return variables_; }
    const std::vector<std::shared_ptr<Field>>& fields() const { return fields_; }

    void attach_particle_system(std::shared_ptr<ParticleSystem> ps) { ps_ = std::move(ps); }
    ParticleSystem* particle_system() const { return ps_.get(); }

    int particle_count() const { return ps_ ? ps_->particle_count() : 0; }

private:
    void reserve_name(const std::string& name);

    enum class Kind { Constant, Variable, Field };
    std::vector<std::unique_ptr<Constant>> constants_;
    std::vector<std::unique_ptr<Variable>> variables_;
    std::vector<std::shared_ptr<Field>> fields_;
    std::unordered_map<std::string, Kind> index_;
    std::shared_ptr<ParticleSystem> ps_;
};

}  // namespace nauticle
