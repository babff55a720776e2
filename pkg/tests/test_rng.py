from equimean.rng import Xoshiro256StarStar, as_rng

# regression anchors for the documented generator (splitmix64-seeded
# xoshiro256**); a port producing these four values replays every fixture
GOLDEN_SEED42 = [
    1546998764402558742,
    6990951692964543102,
    12544586762248559009,
    17057574109182124193,
]
GOLDEN_SEED0 = [
    11091344671253066420,
    13793997310169335082,
    1900383378846508768,
    7684712102626143532,
]


def test_golden_outputs():
    r = Xoshiro256StarStar(42)
    assert [r.next_u64() for _ in range(4)] == GOLDEN_SEED42
    r = Xoshiro256StarStar(0)
    assert [r.next_u64() for _ in range(4)] == GOLDEN_SEED0


def test_same_seed_same_stream():
    a, b = Xoshiro256StarStar(123), Xoshiro256StarStar(123)
    assert [a.next_u64() for _ in range(50)] == [b.next_u64() for _ in range(50)]


def test_different_seeds_differ():
    a, b = Xoshiro256StarStar(1), Xoshiro256StarStar(2)
    assert [a.next_u64() for _ in range(8)] != [b.next_u64() for _ in range(8)]


def test_random_unit_interval():
    r = Xoshiro256StarStar(7)
    values = [r.random() for _ in range(2000)]
    assert all(0.0 <= v < 1.0 for v in values)
    # crude uniformity: mean near 1/2
    assert abs(sum(values) / len(values) - 0.5) < 0.02


def test_uniform_and_randrange():
    r = Xoshiro256StarStar(9)
    assert all(2.0 <= r.uniform(2.0, 5.0) < 5.0 for _ in range(100))
    counts = [0] * 7
    for _ in range(7000):
        counts[r.randrange(7)] += 1
    assert min(counts) > 700


def test_as_rng_passthrough():
    r = Xoshiro256StarStar(5)
    assert as_rng(r) is r
    assert as_rng(5).next_u64() == Xoshiro256StarStar(5).next_u64()
