// Writes every built-in artifact to a corpus directory, one file per entry.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "bienforce/corpus.hpp"

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "corpus";
  std::filesystem::create_directories(dir);
  static const std::map<std::string, std::string> ext = {{"process", ".proc"},
                                                         {"formula", ".shml"},
                                                         {"monitor", ".mon"},
                                                         {"trace", ".tr"}};
  for (const auto& a : bienforce::corpus_artifacts()) {
    std::ofstream out(dir / (a.name + ext.at(a.kind)));
    out << "# " << a.provenance << "\n" << a.text << "\n";
  }
  std::cout << "wrote " << bienforce::corpus_artifacts().size() << " artifacts to "
            << dir << "\n";
  return 0;
}
