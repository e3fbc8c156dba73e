package lab;

public class Violin {
    public void observeViolin() {
        string.tune(pitch);
        bow.rosin(horsehair);
        count = measure(sample);
        pitch = string.frequency();
        bridge.adjust(bow);
    }

    public void revisitViolin() {
        pitch = string.frequency();
        string.tune(pitch);
        count = measure(sample, window);
        bridge.adjust(bow);
        bow.rosin(horsehair);
    }
}
