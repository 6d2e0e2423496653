// Copyright 2026 The capcurate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <string>

#include "capcurate/hallucination.h"

namespace capcurate {

std::string DefaultVocabularyText() {
  return
    "person\n"
    "people\tperson\n"
    "man\tperson\n"
    "men\tperson\n"
    "woman\tperson\n"
    "women\tperson\n"
    "boy\tperson\n"
    "girl\tperson\n"
    "child\tperson\n"
    "children\tperson\n"
    "kid\tperson\n"
    "kids\tperson\n"
    "guy\tperson\n"
    "lady\tperson\n"
    "player\tperson\n"
    "skier\tperson\n"
    "surfer\tperson\n"
    "skateboarder\tperson\n"
    "snowboarder\tperson\n"
    "pedestrian\tperson\n"
    "baby\tperson\n"
    "adult\tperson\n"
    "rider\tperson\n"
    "batter\tperson\n"
    "pitcher\tperson\n"
    "catcher\tperson\n"
    "tourist\tperson\n"
    "worker\tperson\n"
    "officer\tperson\n"
    "bicycle\n"
    "bike\tbicycle\n"
    "cycle\tbicycle\n"
    "mountain bike\tbicycle\n"
    "car\n"
    "automobile\tcar\n"
    "sedan\tcar\n"
    "taxi\tcar\n"
    "cab\tcar\n"
    "van\tcar\n"
    "suv\tcar\n"
    "motorcycle\n"
    "motorbike\tmotorcycle\n"
    "motor bike\tmotorcycle\n"
    "scooter\tmotorcycle\n"
    "moped\tmotorcycle\n"
    "dirt bike\tmotorcycle\n"
    "airplane\n"
    "plane\tairplane\n"
    "aeroplane\tairplane\n"
    "jet\tairplane\n"
    "airliner\tairplane\n"
    "aircraft\tairplane\n"
    "bus\n"
    "trolley\tbus\n"
    "minibus\tbus\n"
    "double decker\tbus\n"
    "train\n"
    "locomotive\ttrain\n"
    "tram\ttrain\n"
    "subway\ttrain\n"
    "truck\n"
    "lorry\ttruck\n"
    "pickup truck\ttruck\n"
    "fire truck\ttruck\n"
    "boat\n"
    "ship\tboat\n"
    "sailboat\tboat\n"
    "canoe\tboat\n"
    "kayak\tboat\n"
    "yacht\tboat\n"
    "ferry\tboat\n"
    "raft\tboat\n"
    "traffic light\n"
    "stop light\ttraffic light\n"
    "stoplight\ttraffic light\n"
    "traffic signal\ttraffic light\n"
    "fire hydrant\n"
    "hydrant\tfire hydrant\n"
    "stop sign\n"
    "parking meter\n"
    "meter\tparking meter\n"
    "bench\n"
    "bird\n"
    "pigeon\tbird\n"
    "seagull\tbird\n"
    "duck\tbird\n"
    "goose\tbird\n"
    "parrot\tbird\n"
    "owl\tbird\n"
    "eagle\tbird\n"
    "crow\tbird\n"
    "cat\n"
    "kitten\tcat\n"
    "kitty\tcat\n"
    "dog\n"
    "puppy\tdog\n"
    "pup\tdog\n"
    "doggy\tdog\n"
    "horse\n"
    "pony\thorse\n"
    "foal\thorse\n"
    "colt\thorse\n"
    "sheep\n"
    "lamb\tsheep\n"
    "ram\tsheep\n"
    "ewe\tsheep\n"
    "cow\n"
    "cattle\tcow\n"
    "bull\tcow\n"
    "calf\tcow\n"
    "ox\tcow\n"
    "elephant\n"
    "bear\n"
    "zebra\n"
    "giraffe\n"
    "backpack\n"
    "back pack\tbackpack\n"
    "rucksack\tbackpack\n"
    "knapsack\tbackpack\n"
    "umbrella\n"
    "parasol\tumbrella\n"
    "handbag\n"
    "purse\thandbag\n"
    "hand bag\thandbag\n"
    "clutch\thandbag\n"
    "tie\n"
    "necktie\ttie\n"
    "bow tie\ttie\n"
    "suitcase\n"
    "luggage\tsuitcase\n"
    "suit case\tsuitcase\n"
    "frisbee\n"
    "flying disc\tfrisbee\n"
    "skis\n"
    "ski\tskis\n"
    "snowboard\n"
    "sports ball\n"
    "ball\tsports ball\n"
    "football\tsports ball\n"
    "soccer ball\tsports ball\n"
    "baseball\tsports ball\n"
    "basketball\tsports ball\n"
    "tennis ball\tsports ball\n"
    "volleyball\tsports ball\n"
    "kite\n"
    "baseball bat\n"
    "bat\tbaseball bat\n"
    "baseball glove\n"
    "glove\tbaseball glove\n"
    "mitt\tbaseball glove\n"
    "skateboard\n"
    "skate board\tskateboard\n"
    "surfboard\n"
    "surf board\tsurfboard\n"
    "board\tsurfboard\n"
    "tennis racket\n"
    "racket\ttennis racket\n"
    "racquet\ttennis racket\n"
    "bottle\n"
    "wine glass\n"
    "wineglass\twine glass\n"
    "cup\n"
    "mug\tcup\n"
    "fork\n"
    "knife\n"
    "spoon\n"
    "bowl\n"
    "banana\n"
    "apple\n"
    "sandwich\n"
    "burger\tsandwich\n"
    "sub\tsandwich\n"
    "hamburger\tsandwich\n"
    "orange\n"
    "broccoli\n"
    "carrot\n"
    "hot dog\n"
    "hotdog\thot dog\n"
    "pizza\n"
    "donut\n"
    "doughnut\tdonut\n"
    "cake\n"
    "cupcake\tcake\n"
    "cheesecake\tcake\n"
    "chair\n"
    "stool\tchair\n"
    "seat\tchair\n"
    "armchair\tchair\n"
    "couch\n"
    "sofa\tcouch\n"
    "loveseat\tcouch\n"
    "potted plant\n"
    "houseplant\tpotted plant\n"
    "house plant\tpotted plant\n"
    "plant\tpotted plant\n"
    "bed\n"
    "dining table\n"
    "table\tdining table\n"
    "desk\tdining table\n"
    "toilet\n"
    "urinal\ttoilet\n"
    "tv\n"
    "television\ttv\n"
    "tv screen\ttv\n"
    "laptop\n"
    "notebook computer\tlaptop\n"
    "mouse\n"
    "computer mouse\tmouse\n"
    "remote\n"
    "remote control\tremote\n"
    "controller\tremote\n"
    "keyboard\n"
    "cell phone\n"
    "phone\tcell phone\n"
    "cellphone\tcell phone\n"
    "smartphone\tcell phone\n"
    "mobile phone\tcell phone\n"
    "microwave\n"
    "oven\n"
    "stove\toven\n"
    "toaster\n"
    "sink\n"
    "refrigerator\n"
    "fridge\trefrigerator\n"
    "book\n"
    "novel\tbook\n"
    "clock\n"
    "vase\n"
    "scissors\n"
    "teddy bear\n"
    "teddybear\tteddy bear\n"
    "stuffed animal\tteddy bear\n"
    "hair drier\n"
    "hair dryer\thair drier\n"
    "hairdryer\thair drier\n"
    "blow dryer\thair drier\n"
    "toothbrush\n"
    "tooth brush\ttoothbrush\n";
}

}  // namespace capcurate
