// Acceptance suite as a test binary: one PASS/FAIL line per criterion.

#include <iostream>

#include "acceptance.hpp"

int main() {
  inflow::acceptance::Options o;
  o.progress = [](const std::string& m) { std::cerr << "  done " << m << std::endl; };
  const auto outcomes = inflow::acceptance::run(o);
  return inflow::acceptance::report(outcomes, std::cout) == 0 ? 0 : 1;
}
