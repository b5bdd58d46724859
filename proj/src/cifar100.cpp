#include "strent/structure_gen.hpp"

namespace strent {

namespace {

struct Row {
    const char* name;
    const char* superclass;
    const char* category;
    const char* supercategory;
};

// Fine labels are in CIFAR-100's alphabetical label order.
constexpr Row kRows[] = {
    {"apple", "fruit and vegetables", "plants", "plants"},
    {"aquarium_fish", "fish", "animals-water", "animals"},
    {"baby", "people", "animals-human", "animals"},
    {"bear", "large carnivores", "animals-mammals", "animals"},
    {"beaver", "aquatic mammals", "animals-water", "animals"},
    {"bed", "household furniture", "objects-other", "objects"},
    {"bee", "insects", "animals-other", "animals"},
    {"beetle", "insects", "animals-other", "animals"},
    {"bicycle", "vehicles 1", "objects-vehicle", "objects"},
    {"bottle", "food containers", "objects-other", "objects"},
    {"bowl", "food containers", "objects-other", "objects"},
    {"boy", "people", "animals-human", "animals"},
    {"bridge", "large man-made outdoor thing", "landscape", "landscape"},
    {"bus", "vehicles 1", "objects-vehicle", "objects"},
    {"butterfly", "insects", "animals-other", "animals"},
    {"camel", "large omnivores and herbivore", "animals-mammals", "animals"},
    {"can", "food containers", "objects-other", "objects"},
    {"castle", "large man-made outdoor thing", "landscape", "landscape"},
    {"caterpillar", "insects", "animals-other", "animals"},
    {"cattle", "large omnivores and herbivore", "animals-mammals", "animals"},
    {"chair", "household furniture", "objects-other", "objects"},
    {"chimpanzee", "large omnivores and herbivore", "animals-mammals", "animals"},
    {"clock", "household electrical devices", "objects-other", "objects"},
    {"cloud", "large natural outdoor scenes", "landscape", "landscape"},
    {"cockroach", "insects", "animals-other", "animals"},
    {"couch", "household furniture", "objects-other", "objects"},
    {"crab", "non-insect invertebrates", "animals-other", "animals"},
    {"crocodile", "reptiles", "animals-other", "animals"},
    {"cup", "food containers", "objects-other", "objects"},
    {"dinosaur", "reptiles", "animals-other", "animals"},
    {"dolphin", "aquatic mammals", "animals-water", "animals"},
    {"elephant", "large omnivores and herbivore", "animals-mammals", "animals"},
    {"flatfish", "fish", "animals-water", "animals"},
    {"forest", "large natural outdoor scenes", "landscape", "landscape"},
    {"fox", "medium-sized mammals", "animals-mammals", "animals"},
    {"girl", "people", "animals-human", "animals"},
    {"hamster", "small mammals", "animals-mammals", "animals"},
    {"house", "large man-made outdoor thing", "landscape", "landscape"},
    {"kangaroo", "large omnivores and herbivore", "animals-mammals", "animals"},
    {"keyboard", "household electrical devices", "objects-other", "objects"},
    {"lamp", "household electrical devices", "objects-other", "objects"},
    {"lawn_mower", "vehicles 2", "objects-vehicle", "objects"},
    {"leopard", "large carnivores", "animals-mammals", "animals"},
    {"lion", "large carnivores", "animals-mammals", "animals"},
    {"lizard", "reptiles", "animals-other", "animals"},
    {"lobster", "non-insect invertebrates", "animals-other", "animals"},
    {"man", "people", "animals-human", "animals"},
    {"maple_tree", "trees", "plants", "plants"},
    {"motorcycle", "vehicles 1", "objects-vehicle", "objects"},
    {"mountain", "large natural outdoor scenes", "landscape", "landscape"},
    {"mouse", "small mammals", "animals-mammals", "animals"},
    {"mushroom", "fruit and vegetables", "plants", "plants"},
    {"oak_tree", "trees", "plants", "plants"},
    {"orange", "fruit and vegetables", "plants", "plants"},
    {"orchid", "flowers", "plants", "plants"},
    {"otter", "aquatic mammals", "animals-water", "animals"},
    {"palm_tree", "trees", "plants", "plants"},
    {"pear", "fruit and vegetables", "plants", "plants"},
    {"pickup_truck", "vehicles 1", "objects-vehicle", "objects"},
    {"pine_tree", "trees", "plants", "plants"},
    {"plain", "large natural outdoor scenes", "landscape", "landscape"},
    {"plate", "food containers", "objects-other", "objects"},
    {"poppy", "flowers", "plants", "plants"},
    {"porcupine", "medium-sized mammals", "animals-mammals", "animals"},
    {"possum", "medium-sized mammals", "animals-mammals", "animals"},
    {"rabbit", "small mammals", "animals-mammals", "animals"},
    {"raccoon", "medium-sized mammals", "animals-mammals", "animals"},
    {"ray", "fish", "animals-water", "animals"},
    {"road", "large man-made outdoor thing", "landscape", "landscape"},
    {"rocket", "vehicles 2", "objects-vehicle", "objects"},
    {"rose", "flowers", "plants", "plants"},
    {"sea", "large natural outdoor scenes", "landscape", "landscape"},
    {"seal", "aquatic mammals", "animals-water", "animals"},
    {"shark", "fish", "animals-water", "animals"},
    {"shrew", "small mammals", "animals-mammals", "animals"},
    {"skunk", "medium-sized mammals", "animals-mammals", "animals"},
    {"skyscraper", "large man-made outdoor thing", "landscape", "landscape"},
    {"snail", "non-insect invertebrates", "animals-other", "animals"},
    {"snake", "reptiles", "animals-other", "animals"},
    {"spider", "non-insect invertebrates", "animals-other", "animals"},
    {"squirrel", "small mammals", "animals-mammals", "animals"},
    {"streetcar", "vehicles 2", "objects-vehicle", "objects"},
    {"sunflower", "flowers", "plants", "plants"},
    {"sweet_pepper", "fruit and vegetables", "plants", "plants"},
    {"table", "household furniture", "objects-other", "objects"},
    {"tank", "vehicles 2", "objects-vehicle", "objects"},
    {"telephone", "household electrical devices", "objects-other", "objects"},
    {"television", "household electrical devices", "objects-other", "objects"},
    {"tiger", "large carnivores", "animals-mammals", "animals"},
    {"tractor", "vehicles 2", "objects-vehicle", "objects"},
    {"train", "vehicles 1", "objects-vehicle", "objects"},
    {"trout", "fish", "animals-water", "animals"},
    {"tulip", "flowers", "plants", "plants"},
    {"turtle", "reptiles", "animals-other", "animals"},
    {"wardrobe", "household furniture", "objects-other", "objects"},
    {"whale", "aquatic mammals", "animals-water", "animals"},
    {"willow_tree", "trees", "plants", "plants"},
    {"wolf", "large carnivores", "animals-mammals", "animals"},
    {"woman", "people", "animals-human", "animals"},
    {"worm", "non-insect invertebrates", "animals-other", "animals"},
};

HierarchySpec build() {
    HierarchySpec spec;
    spec.level_names = {"superclass", "category", "supercategory"};
    spec.levels.resize(3);
    for (const Row& row : kRows) {
        spec.class_names.emplace_back(row.name);
        spec.levels[0].emplace_back(row.superclass);
        spec.levels[1].emplace_back(row.category);
        spec.levels[2].emplace_back(row.supercategory);
    }
    return spec;
}

}  // namespace

const HierarchySpec& cifar100_hierarchy() {
    static const HierarchySpec spec = build();
    return spec;
}

}  // namespace strent
