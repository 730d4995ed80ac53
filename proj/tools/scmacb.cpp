#include <iostream>

#include "scma/scma.hpp"

int main() {
    std::cout << "scma-udcg " << scma::kToolVersion << "\n";
    return 0;
}
