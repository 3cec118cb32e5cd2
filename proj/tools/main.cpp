#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  return ocgad::cli::run(argc, argv, std::cout, std::cerr);
}
