from tlsnoise import chart_to_string, run_scenario
from tlsnoise.options import ChartConfig
from tlsnoise.random_streams import RandomStream
from tlsnoise.scenarios import BUILTIN_SCENARIOS, load_scenario


for name in BUILTIN_SCENARIOS:
    scenario = load_scenario(name)
    chart, _ = run_scenario(
        scenario.defects, scenario.chart_config(ChartConfig()), RandomStream(0)
    )
    if chart.shape[1] == 1:
        continue
    for line in chart_to_string(chart, title=name):
        print(line)
    print()
