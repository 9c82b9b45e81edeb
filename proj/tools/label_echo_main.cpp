// rca-label-echo: oracle solver for harness testing. Answers every
// scenario by echoing the label that sits next to the input file, which is
// by construction a perfect prediction.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: rca-label-echo <input.json>\n";
        return 2;
    }
    std::filesystem::path label = std::filesystem::path(argv[1]).parent_path() / "label.json";
    std::ifstream in(label, std::ios::binary);
    if (!in) {
        std::cerr << "label not found: " << label << "\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::cout << buf.str();
    return 0;
}
