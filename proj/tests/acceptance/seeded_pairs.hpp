#pragma once

#include <string>
#include <vector>

struct SeededPair {
  std::string name;
  std::string schema;
  std::vector<std::string> constraints;
  std::string q1;
  std::string q2;
};

const std::vector<SeededPair>& inequivalent_pairs();
const std::vector<SeededPair>& equivalent_pairs();
