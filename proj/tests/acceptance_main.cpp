#include <iostream>

#include "noma/acceptance.hpp"

int main() {
    return noma::run_acceptance(std::cout);
}
