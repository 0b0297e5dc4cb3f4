"""Day-by-day decision trace of a cleaning policy over one sampled year.

Steps the environment under a fixed-interval rule and prints the days
around each cleaning: soiling builds up, efficiency sags, the clean resets
both, and the daily energy-loss cost tracks irradiance.
"""

from pvclean.agents import FixedIntervalPolicy
from pvclean.environment import CleaningEnv, preset
from pvclean.rng import replication_entropy

cfg = preset("S1exp", horizon_years=1)
policy = FixedIntervalPolicy(20, cfg)

env = CleaningEnv(cfg)
obs = env.reset(replication_entropy(cfg.seed, 0))
rows = []
done = False
while not done:
    action = policy.action(obs)
    res = env.step(action)
    rows.append((res.info["day"], action, res.info["soiling"],
                 res.info["efficiency"], res.info["energy_loss_cost"],
                 res.info["cleaning_cost_incurred"]))
    obs = res.observation
    done = res.done

print(f"{'day':>4} {'act':>4} {'soiling':>9} {'eff':>7} "
      f"{'energy loss':>12} {'cleaning':>9}")
shown = 0
for day, action, soiling, eff, loss, cc in rows:
    near_clean = any(abs(day - c) <= 2 for c in range(20, 365, 20))
    if day < 5 or (near_clean and shown < 40):
        mark = "  <-- clean" if action else ""
        print(f"{day:>4} {action:>4} {soiling:>9.4f} {eff:>7.4f} "
              f"{loss:>12.6f} {cc:>9.4f}{mark}")
        shown += near_clean

total = sum(loss + cc for *_, loss, cc in rows)
cleanings = sum(a for _, a, *_ in rows)
print(f"\nyear total: {total:.3f} USD with {cleanings} cleanings "
      f"(energy loss {total - cleanings * cfg.cleaning_cost:.3f}, "
      f"cleaning {cleanings * cfg.cleaning_cost:.3f})")
