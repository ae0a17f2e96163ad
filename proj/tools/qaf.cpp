#include <iostream>

int main() {
    std::cout << "qaf: commands pending\n";
    return 0;
}
