#pragma once

#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>

#include "vnlab/error.hpp"

namespace vnlab {

/// Size limits that keep every computation at desk scale.
struct Caps {
  std::uint64_t crossed_dim = 128;        // |G|*|X| for crossed products
  std::uint64_t bernoulli_atoms = 4096;   // |base|^|G|
  std::uint64_t torus_group = 100000;     // closure size of matrix groups mod N
  std::uint64_t action_entries = 20000000;  // |G|*|X| stored permutation entries
  std::uint64_t left_regular = 256;       // |G| for L(G)
  std::uint64_t ball = 1000000;           // word-metric ball size
  std::uint64_t group_enumeration = 100000;  // brute-force element enumeration
  std::uint64_t semidirect = 1000000;     // |G|*|H| for enumerable semidirect products
  std::uint64_t commutant_dim = 24;       // ambient d for commutant in M_d
};

inline void check_cap(const char* what, std::uint64_t requested, std::uint64_t cap) {
  if (requested > cap) throw CapExceeded(what, requested, cap);
}

/// Parses "key=value,key=value" overrides; unknown keys are an input error.
inline Caps parse_caps(std::string_view text, Caps caps = {}) {
  std::stringstream in{std::string(text)};
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("caps override '" + item + "' lacks '='");
    const std::string key = item.substr(0, eq);
    std::uint64_t value = 0;
    try {
      value = std::stoull(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("caps override '" + item + "' has a non-numeric value");
    }
    if (value == 0) throw InputError("caps must be positive: " + key);
    if (key == "crossed") caps.crossed_dim = value;
    else if (key == "bernoulli") caps.bernoulli_atoms = value;
    else if (key == "torus") caps.torus_group = value;
    else if (key == "action") caps.action_entries = value;
    else if (key == "left_regular") caps.left_regular = value;
    else if (key == "ball") caps.ball = value;
    else if (key == "group") caps.group_enumeration = value;
    else if (key == "semidirect") caps.semidirect = value;
    else if (key == "commutant") caps.commutant_dim = value;
    else throw InputError("unknown caps key '" + key + "'");
  }
  return caps;
}

/// Defaults, overridden by the VNLAB_CAPS environment variable when set.
inline Caps caps_from_environment() {
  if (const char* env = std::getenv("VNLAB_CAPS")) return parse_caps(env);
  return Caps{};
}

}  // namespace vnlab
