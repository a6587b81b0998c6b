#include "triehh/ingest.hpp"

#include <stdexcept>

namespace triehh {

namespace {

// Top-100 words with population frequencies from a 1.6M-tweet corpus of
// ~650k users; the companion table keeps only words absent from a large
// reference dictionary.
const FrequencyTable kSentiment140Top100 = {{
    {"the", 0.1028},
    {"you", 0.0360},
    {"and", 0.0308},
    {"just", 0.0209},
    {"i'm", 0.0169},
    {"for", 0.0143},
    {"have", 0.0107},
    {"going", 0.0086},
    {"not", 0.0074},
    {"that", 0.0073},
    {"was", 0.0069},
    {"good", 0.0062},
    {"work", 0.0056},
    {"it's", 0.0055},
    {"this", 0.0053},
    {"watching", 0.0052},
    {"back", 0.0051},
    {"got", 0.0049},
    {"with", 0.0048},
    {"had", 0.0048},
    {"love", 0.0047},
    {"really", 0.0047},
    {"can't", 0.0046},
    {"has", 0.0045},
    {"but", 0.0043},
    {"miss", 0.0039},
    {"still", 0.0039},
    {"its", 0.0037},
    {"want", 0.0036},
    {"getting", 0.0035},
    {"day", 0.0035},
    {"don't", 0.0033},
    {"happy", 0.0033},
    {"what", 0.0032},
    {"now", 0.0032},
    {"why", 0.0031},
    {"lol", 0.0031},
    {"home", 0.0031},
    {"wish", 0.0030},
    {"today", 0.0030},
    {"all", 0.0029},
    {"new", 0.0029},
    {"off", 0.0028},
    {"need", 0.0028},
    {"your", 0.0028},
    {"hate", 0.0026},
    {"sad", 0.0026},
    {"last", 0.0026},
    {"think", 0.0025},
    {"trying", 0.0025},
    {"out", 0.0025},
    {"get", 0.0025},
    {"hey", 0.0024},
    {"working", 0.0023},
    {"like", 0.0023},
    {"finally", 0.0022},
    {"too", 0.0022},
    {"well", 0.0022},
    {"about", 0.0022},
    {"one", 0.0021},
    {"will", 0.0021},
    {"thanks", 0.0021},
    {"very", 0.0021},
    {"are", 0.0021},
    {"feel", 0.0020},
    {"cant", 0.0020},
    {"time", 0.0020},
    {"bored", 0.0020},
    {"feeling", 0.0019},
    {"omg", 0.0019},
    {"having", 0.0018},
    {"tired", 0.0018},
    {"her", 0.0018},
    {"ugh", 0.0018},
    {"more", 0.0017},
    {"waiting", 0.0017},
    {"missing", 0.0016},
    {"sitting", 0.0016},
    {"twitter", 0.0016},
    {"haha", 0.0016},
    {"listening", 0.0016},
    {"how", 0.0016},
    {"wants", 0.0016},
    {"great", 0.0015},
    {"wow", 0.0015},
    {"sick", 0.0014},
    {"they", 0.0014},
    {"know", 0.0014},
    {"can", 0.0014},
    {"night", 0.0014},
    {"another", 0.0014},
    {"morning", 0.0014},
    {"damn", 0.0014},
    {"@mileycyrus", 0.0014},
    {"way", 0.0014},
    {"yay", 0.0014},
    {"dont", 0.0014},
    {"looking", 0.0013},
    {"some", 0.0013},
    {"she", 0.0013},
}};

const FrequencyTable kOovTop100 = {{
    {"dont", 0.011741},
    {"thats", 0.006008},
    {"didnt", 0.004292},
    {"sooo", 0.004023},
    {"awww", 0.003468},
    {"@mileycyrus", 0.002931},
    {"@tommcfly", 0.002556},
    {"soooo", 0.002473},
    {"@ddlovato", 0.002254},
    {"doesnt", 0.001800},
    {"#followfriday", 0.001694},
    {"havent", 0.001559},
    {"@jonasbrothers", 0.001553},
    {"isnt", 0.001336},
    {"#fb", 0.001168},
    {"sooooo", 0.001041},
    {"awwww", 0.001037},
    {"tweetdeck", 0.000958},
    {"couldnt", 0.000939},
    {":'(", 0.000931},
    {"wasnt", 0.000913},
    {"(via", 0.000896},
    {"@davidarchie", 0.000892},
    {"@donniewahlberg", 0.000865},
    {"@jonathanrknight", 0.000825},
    {"*sigh*", 0.000811},
    {"@jordanknight", 0.000749},
    {"oooh", 0.000730},
    {"@mitchelmusso", 0.000708},
    {"(and", 0.000705},
    {"ohhh", 0.000693},
    {"ahhhh", 0.000664},
    {"*hugs*", 0.000647},
    {"nooo", 0.000634},
    {"#ff", 0.000628},
    {"#squarespace", 0.000612},
    {"youre", 0.000609},
    {"p.s", 0.000594},
    {"noooo", 0.000588},
    {"b/c", 0.000581},
    {"ughh", 0.000575},
    {"goodmorning", 0.000555},
    {"mmmm", 0.000553},
    {"re:", 0.000552},
    {"twitpic", 0.000540},
    {"soooooo", 0.000529},
    {"@dougiemcfly", 0.000525},
    {"@selenagomez", 0.000524},
    {"bgt", 0.000514},
    {"realised", 0.000508},
    {"'em", 0.000503},
    {"thankyou", 0.000487},
    {"ya'll", 0.000477},
    {"xxxx", 0.000471},
    {"booo", 0.000464},
    {"youu", 0.000458},
    {"@dannymcfly", 0.000455},
    {"wouldnt", 0.000447},
    {"atleast", 0.000434},
    {"heyy", 0.000432},
    {"'cause", 0.000432},
    {"ughhh", 0.000430},
    {"photo:", 0.000427},
    {"r.i.p", 0.000421},
    {"wooo", 0.000415},
    {"@peterfacinelli", 0.000415},
    {"@aplusk", 0.000409},
    {"tooo", 0.000408},
    {"tommorow", 0.000405},
    {"hayfever", 0.000405},
    {"a.m", 0.000401},
    {"@joeymcintyre", 0.000399},
    {"goood", 0.000389},
    {"urgh", 0.000376},
    {"@youngq", 0.000369},
    {"w/o", 0.000368},
    {"awsome", 0.000360},
    {"(or", 0.000355},
    {"aswell", 0.000354},
    {"skool", 0.000354},
    {"tweetie", 0.000353},
    {"tomorow", 0.000346},
    {"boooo", 0.000336},
    {"@shaundiviney", 0.000335},
    {"#iranelection", 0.000335},
    {":-d", 0.000330},
    {"awwwww", 0.000330},
    {"#seb-day", 0.000329},
    {"nooooo", 0.000327},
    {"yeahh", 0.000326},
    {"@perezhilton", 0.000322},
    {"@tomfelton", 0.000316},
    {"g'night", 0.000313},
    {"twitterverse", 0.000311},
    {"(y)", 0.000304},
    {"grrrr", 0.000299},
    {"@officialtila", 0.000296},
    {"realise", 0.000289},
    {"(not", 0.000286},
    {"@kirstiealley", 0.000285},
}};

}  // namespace

const FrequencyTable& fixture_table(const std::string& name) {
  if (name == "sentiment140-top100") return kSentiment140Top100;
  if (name == "oov-top100") return kOovTop100;
  throw std::invalid_argument("unknown fixture \"" + name +
                              "\" (expected sentiment140-top100 or oov-top100)");
}

std::vector<std::string> fixture_names() {
  return {"sentiment140-top100", "oov-top100"};
}

}  // namespace triehh
