#pragma once

#include <string>

#include "mealy/io.hpp"

#ifndef MEALY_FIXTURE_DIR
#error "MEALY_FIXTURE_DIR must point at the fixtures directory"
#endif

inline std::string fixture_path(const std::string& name) { return std::string(MEALY_FIXTURE_DIR) + "/" + name + ".json"; }

inline mealy::MealyAutomaton fixture(const std::string& name) { return mealy::load_automaton(fixture_path(name)); }
