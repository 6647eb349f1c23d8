// Writes the synthetic chart fixture to the path given as argv[1].

#include "fixture.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: make_fixture <out.csv> [rows] [seed] [defects]\n";
        return 2;
    }
    fixture::ChartOptions o;
    if (argc > 2) o.rows = std::stoul(argv[2]);
    if (argc > 3) o.seed = std::stoull(argv[3]);
    if (argc > 4) o.with_defects = std::string(argv[4]) == "1";
    std::ofstream out(argv[1], std::ios::binary);
    out << fixture::chart_csv(o);
    return out ? 0 : 1;
}
