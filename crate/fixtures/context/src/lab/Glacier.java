package lab;

public class Glacier {
    public void observeGlacier() {
        ice.core(depth);
        drift.track(crevasse);
        output = format(record);
        depth = ice.thickness();
        moraine.survey(drift);
    }

    public void revisitGlacier() {
        depth = ice.thickness();
        ice.core(depth);
        output = format(record, locale);
        moraine.survey(drift);
        drift.track(crevasse);
    }
}
