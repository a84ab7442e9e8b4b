#include <string>

namespace text {

int classify(const std::string& s, bool strict) {
    int score = 0;
    for (char c : s) {
        switch (c) {
            case 'a':
            case 'b':
                score += 1;
                break;
            default:
                score += strict ? 2 : 1;
        }
    }
    while (score > 10 || score < 0) {
        score /= 2;
    }
    return score;
}

}  // namespace text
