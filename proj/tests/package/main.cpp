#include <iostream>
#include "graftlab/torus_oracle.hpp"
int main() { std::cout << graftlab::ray_gap(graftlab::TorusPoint::make({0.3, 1.0}), {1, 0}, 1.0) << "\n"; }
