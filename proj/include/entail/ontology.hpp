#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entail/logic.hpp"

namespace entail {

struct Rule {
  std::string name;
  Formula body;
};

inline bool is_valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto lower_or_underscore = [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!lower_or_underscore(name.front())) return false;
  for (char c : name)
    if (!lower_or_underscore(c) && !digit(c)) return false;
  return true;
}

/// Finding atoms, diagnosis atoms, and the rule set, with one shared name
/// space. Atom indices are dense and follow declaration order; findings and
/// diagnoses additionally carry an ordinal within their own kind. Immutable
/// once built, safe to share across threads.
class Ontology {
 public:
  int declare(std::string name, AtomKind kind) {
    if (kind == AtomKind::Auxiliary)
      throw std::invalid_argument("auxiliary atoms cannot be declared");
    if (!is_valid_identifier(name))
      throw std::invalid_argument("invalid atom name '" + name + "'");
    if (atom_by_name_.contains(name))
      throw std::invalid_argument("duplicate declaration of '" + name + "'");
    const int index = static_cast<int>(atoms_.size());
    auto& members = kind == AtomKind::Finding ? findings_ : diagnoses_;
    ordinal_.push_back(static_cast<int>(members.size()));
    members.push_back(index);
    atom_by_name_.emplace(name, index);
    atoms_.push_back(Atom{std::move(name), kind, index});
    return index;
  }

  void add_rule(std::string name, Formula body) {
    if (!is_valid_identifier(name))
      throw std::invalid_argument("invalid rule name '" + name + "'");
    for (const Rule& rule : rules_)
      if (rule.name == name)
        throw std::invalid_argument("duplicate rule name '" + name + "'");
    for (int atom : collect_atoms(body))
      if (atom >= atom_count())
        throw std::invalid_argument("rule '" + name + "' references an undeclared atom");
    rules_.push_back(Rule{std::move(name), std::move(body)});
  }

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int finding_count() const { return static_cast<int>(findings_.size()); }
  int diagnosis_count() const { return static_cast<int>(diagnoses_.size()); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(int index) const { return atoms_.at(index); }
  const std::vector<int>& findings() const { return findings_; }
  const std::vector<int>& diagnoses() const { return diagnoses_; }
  const std::vector<Rule>& rules() const { return rules_; }

  std::optional<int> atom_index_of(std::string_view name) const {
    auto it = atom_by_name_.find(std::string(name));
    if (it == atom_by_name_.end()) return std::nullopt;
    return it->second;
  }

  /// Ordinal of an atom within its own kind (position among findings, or
  /// among diagnoses).
  int kind_ordinal(int atom_index) const { return ordinal_.at(atom_index); }

  int finding_atom(int ordinal) const { return findings_.at(ordinal); }
  int diagnosis_atom(int ordinal) const { return diagnoses_.at(ordinal); }
  const std::string& finding_name(int ordinal) const {
    return atoms_[findings_.at(ordinal)].name;
  }
  const std::string& diagnosis_name(int ordinal) const {
    return atoms_[diagnoses_.at(ordinal)].name;
  }

  /// Finding ordinal for a name, if the name is a declared finding.
  std::optional<int> find_finding(std::string_view name) const {
    return find_of_kind(name, AtomKind::Finding);
  }

  /// Diagnosis ordinal for a name, if the name is a declared diagnosis.
  std::optional<int> find_diagnosis(std::string_view name) const {
    return find_of_kind(name, AtomKind::Diagnosis);
  }

 private:
  std::optional<int> find_of_kind(std::string_view name, AtomKind kind) const {
    auto index = atom_index_of(name);
    if (!index || atoms_[*index].kind != kind) return std::nullopt;
    return ordinal_[*index];
  }

  std::vector<Atom> atoms_;
  std::vector<int> findings_;
  std::vector<int> diagnoses_;
  std::vector<int> ordinal_;
  std::vector<Rule> rules_;
  std::unordered_map<std::string, int> atom_by_name_;
};

}  // namespace entail
